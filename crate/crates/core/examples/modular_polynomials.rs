//! j by q-expansion, reduction to the fundamental domain, and the modular polynomials Phi_N.

use zpkit::modular::{j_eval, modular_polynomial, phi_residual, psi, reduce_to_fundamental_domain, UpperHalfPoint};
use zpkit::numeric::{self, Complex};

fn main() -> zpkit::Result<()> {
    let prec = 128;
    for z in ["i", "0.5+0.86602540378443864676372317075293618i", "0.1+0.2i"] {
        let p = UpperHalfPoint::parse(prec, z)?;
        let (w, g) = reduce_to_fundamental_domain(&p)?;
        let j = j_eval(&p, prec)?;
        println!(
            "z = {z}: reduced to {} + {}i by {:?}, j = {} + {}i ({} terms)",
            numeric::fmt_real(&w.value().re, 8),
            numeric::fmt_real(&w.value().im, 8),
            g.entries().map(|e| e.to_string()),
            numeric::fmt_real(&j.value.re, 12),
            numeric::fmt_real(&j.value.im, 12),
            j.terms
        );
    }

    for n in 1..=3 {
        let phi = modular_polynomial(n)?;
        println!("Phi_{n}: degree {} (psi = {}), symmetric {}", phi.degree_x(), psi(n), phi.is_symmetric());
    }
    println!("Phi_2 = {}", modular_polynomial(2)?.to_string_xy());

    let tau = UpperHalfPoint::new(Complex::from_f64(prec, 0.21, 1.13))?;
    let two_tau = UpperHalfPoint::new(Complex::from_f64(prec, 0.42, 2.26))?;
    let r = phi_residual(&*modular_polynomial(2)?, &tau, &two_tau, prec)?;
    println!("|Phi_2(j(tau), j(2 tau))| = {}", numeric::fmt_real(&r, 3));
    Ok(())
}
