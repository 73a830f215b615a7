//! Fixtures and oracles shared by the integration tests.
#![allow(dead_code)]

use catsolve_core::catser::TruncTSeries;
use catsolve_core::exactpoly::{BigRat, MPoly};
use num_traits::Zero;

pub const TWO_COLORS: &str = "system { unknowns F1, F2; catalytic u; point a = 1;
  F1 = 1 + t*(u + 2*u*F1^2 + 2*u*F2(a) + u*(F1 - u*F1(a))/(u-1));
  F2 = t*(2*u*F1*F2 + u*F1 + u*F2(a) + u*(F2 - u*F2(a))/(u-1)); }";

pub const HARD: &str = "system { unknowns F1, F2; catalytic u; point a = 1; param s = 2;
  F1 = F2 + t*u^2*F1^2 + t*u*(u*F1 - F1(1))/(u-1);
  F2 = 1 + t*s*u*F1*F2 + t*s*u*(F2 - F2(1))/(u-1); }";

pub const SCALAR: &str = "system { unknowns F; catalytic u; point a = 0; F = 1 + t*(u*F^2 + D[F]); }";

pub const THREE: &str = "system { unknowns F1, F2, F3; catalytic u; point a = 0;
  F1 = 1 + t*(u*F1*F2 + (F1 - F1(0))/u);
  F2 = 1 + t*(F3^2 + u*F2);
  F3 = 1 + t*u*(F1 + F2*F3 - F3(0)); }";

pub const CUBIC: &str = "64*t^3*z0^3 + (48*t^3-72*t^2+2*t)*z0^2 - (15*t^3-9*t^2-19*t+1)*z0 + t^3+27*t^2-19*t+1";

/// Power series root of `p` with `z(0) = c`, by lifting one coefficient at a
/// time through the simple root.
pub fn branch(p: &MPoly<BigRat>, c: &BigRat, n: usize) -> TruncTSeries {
    let t_poly = |z: &[BigRat]| -> Vec<BigRat> {
        // p(z(t), t) mod t^n with dense arithmetic
        let mut out = vec![BigRat::zero(); n];
        for (m, coef) in p.terms() {
            let (j, i) = (m.exp(0) as usize, m.exp(1) as usize);
            let mut pw = vec![BigRat::zero(); n];
            pw[0] = BigRat::from_integer(1.into());
            for _ in 0..i {
                let mut next = vec![BigRat::zero(); n];
                for a in 0..n {
                    for b in 0..n - a {
                        next[a + b] += &pw[a] * &z[b];
                    }
                }
                pw = next;
            }
            for a in 0..n.saturating_sub(j) {
                out[a + j] += coef * &pw[a];
            }
        }
        out
    };
    let dz = p.derivative(1);
    let slope = {
        let mut acc = BigRat::zero();
        for (m, coef) in dz.terms() {
            if m.exp(0) == 0 {
                let mut v = coef.clone();
                for _ in 0..m.exp(1) {
                    v *= c;
                }
                acc += v;
            }
        }
        acc
    };
    let mut z = vec![BigRat::zero(); n];
    z[0] = c.clone();
    for k in 1..n {
        let r = t_poly(&z);
        z[k] = -&r[k] / &slope;
    }
    TruncTSeries::from_slice(n, &z)
}

