// temporary debug
use hyperac_core::potential::{spectral_rates, DoubleWellPotential};
use hyperac_core::profile::{check_supersolution, solve_profile};

fn main() {
    let p = DoubleWellPotential::quartic();
    let prof = solve_profile(&p, 2, 12.0, 0.005, 1e-11).unwrap();
    let m = prof.grid().len() - 1;
    let h = prof.grid().spacing();
    println!("U'(0) = {}", prof.derivative_values()[m / 2]);
    println!("U(0) = {}", prof.values()[m / 2]);
    println!("U(h) = {}", prof.values()[m / 2 + 1]);
    for i in [1usize, 2, m/4, m/2 - 1, m/2, m/2 + 1, 3*m/4, m-2, m-1] {
        let t = prof.grid().node(i);
        let up = prof.derivative_values()[i];
        let fp = p.nonlinearity_prime(prof.values()[i]);
        let mu = 1.0_f64;
        let v1 = up + 0.02;
        let v2 = (-mu * t.abs()).exp();
        let sech2 = 1.0 / (t.cosh() * t.cosh());
        let lv1 = -sech2 * up - 0.02 * fp;
        let lv2 = (mu * mu - mu * t.abs().tanh() - fp) * v2;
        let weight = 1.0 / (mu * t).cosh();
        let (v, lv) = if v1 <= v2 { (v1, lv1) } else { (v2, lv2) };
        println!("i={i} t={t:.3} v1={v1:.4e} v2={v2:.4e} lv={lv:.4e} ratio={:.4e} h={h}", lv / weight);
    }
    let rates = spectral_rates(&p, 2).unwrap();
    match check_supersolution(&prof, &rates, 1.0, None, 0.02) {
        Ok(r) => println!("OK: {r:?}"),
        Err(e) => println!("ERR: {e}"),
    }
}
