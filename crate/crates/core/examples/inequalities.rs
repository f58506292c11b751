//! Hardy and log-weighted Gagliardo-Nirenberg ratios over test families.

use dw_exterior::inequalities::{constant_sweep, hardy_extremal_family, hardy_ratio, translation_family, Inequality};

fn main() -> dw_exterior::Result<()> {
    for p in hardy_extremal_family(&[10.0, 100.0, 1000.0]) {
        println!("{p:?}: hardy ratio {:.5}", hardy_ratio(&p.build(0.01)?)?);
    }
    let family = translation_family(&[2.0, 10.0, 100.0, 1000.0], 1.0, 2);
    for q in [1.5, 2.0, 3.0] {
        let rep = constant_sweep(Inequality::LogGn, &family, q, 0.02)?;
        println!(
            "log-GN q = {q}: ratios {:?}, constant {:.4}, drift {:.2e}",
            rep.ratios, rep.fitted_constant, rep.refinement_drift
        );
    }
    Ok(())
}
