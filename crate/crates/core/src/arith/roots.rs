//! Floating-point roots of rational polynomials (oracles and renderings only).

use num_complex::Complex64;

use super::field::{rat_to_f64, Rat};
use super::poly::Poly;

/// All complex roots of `p` by Aberth–Ehrlich iteration with Newton polishing.
pub fn complex_roots(p: &Poly<Rat>) -> Vec<Complex64> {
    let n = match p.degree() {
        None | Some(0) => return Vec::new(),
        Some(n) => n,
    };
    let lc = rat_to_f64(&p.lc());
    let c: Vec<Complex64> = p.coeffs().iter().map(|x| Complex64::new(rat_to_f64(x) / lc, 0.0)).collect();
    if n == 1 {
        return vec![-c[0]];
    }
    let radius = 1.0 + c[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(0.5 * radius, ang)
        })
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            d = d * x + v;
            v = v * x + a;
        }
        (v, d)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let w = ratio / (1.0 - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (v, d) = eval(*r);
            if d.norm() == 0.0 {
                break;
            }
            *r -= v / d;
        }
    }
    z
}
