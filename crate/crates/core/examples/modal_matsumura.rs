//! Per-mode constants of the diffusion-phenomenon bounds.

use dw_exterior::wave::abstract_matsumura_verify;

fn main() -> dw_exterior::Result<()> {
    let eigs: Vec<f64> = (0..13).map(|i| 10f64.powf(-3.0 + 0.5 * i as f64)).collect();
    let times: Vec<f64> = (0..201).map(|i| 10f64.powf(i as f64 / 100.0)).collect();
    let rep = abstract_matsumura_verify(&eigs, &times)?;
    for ((l, a), b) in eigs.iter().zip(&rep.grad_constants).zip(&rep.dt_constants) {
        println!("lambda = {l:>9.3e}  grad {a:.4}  d_t {b:.4}");
    }
    println!("spread: grad {:.2}, d_t {:.2}", rep.grad_spread, rep.dt_spread);
    Ok(())
}
