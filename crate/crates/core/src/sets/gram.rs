//! Gram matrix of the exponentials `e^{iks}` restricted to a set.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use super::interval::{q, q_to_f64, qf, IntervalUnion, Units, Q};
use crate::error::{Error, Result};

/// `e^{iπt}` with `t` reduced exactly mod 2, exact at multiples of 1/2.
fn unit_pi(t: &Q) -> Complex64 {
    let two = q(2);
    let r = t - (t / &two).floor() * &two;
    if r.is_zero() {
        Complex64::new(1.0, 0.0)
    } else if r == qf(1, 2) {
        Complex64::new(0.0, 1.0)
    } else if r == q(1) {
        Complex64::new(-1.0, 0.0)
    } else if r == qf(3, 2) {
        Complex64::new(0.0, -1.0)
    } else {
        let a = PI * q_to_f64(&r);
        Complex64::new(a.cos(), a.sin())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GramCheck {
    pub kmax: i64,
    /// Entries indexed by `k, l ∈ −kmax..=kmax`.
    pub matrix: Vec<Vec<[f64; 2]>>,
    /// `max |G − I|`.
    pub deviation: f64,
}

/// `G_{kl} = (1/2π) ∫_E e^{i(k−l)s} ds` for `k, l ∈ [−kmax, kmax]`, each
/// interval integrated in closed form.
pub fn exponential_gram(e: &IntervalUnion, kmax: i64) -> Result<GramCheck> {
    if e.units() != Units::Pi {
        return Err(Error::InvalidInput("exponential Gram needs a set in π units".into()));
    }
    if kmax < 0 {
        return Err(Error::InvalidInput("kmax must be non-negative".into()));
    }
    let entry = |m: i64| -> Complex64 {
        if m == 0 {
            return Complex64::new(q_to_f64(&e.measure()) / 2.0, 0.0);
        }
        let mq = q(m);
        let mut acc = Complex64::zero();
        for (a, b) in e.pieces() {
            acc += unit_pi(&(&mq * b)) - unit_pi(&(&mq * a));
        }
        // ∫ e^{imπx} π dx / 2π = (e^{imπb} − e^{imπa}) / (2πim)
        acc / Complex64::new(0.0, 2.0 * PI * m as f64)
    };
    let n = (2 * kmax + 1) as usize;
    let by_diff: Vec<Complex64> = (-2 * kmax..=2 * kmax).map(entry).collect();
    let mut deviation: f64 = 0.0;
    let mut matrix = vec![vec![[0.0; 2]; n]; n];
    for (r, row) in matrix.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            let v = by_diff[(r as i64 - c as i64 + 2 * kmax) as usize];
            *cell = [v.re, v.im];
            let target = if r == c { 1.0 } else { 0.0 };
            deviation = deviation.max((v - Complex64::new(target, 0.0)).norm());
        }
    }
    Ok(GramCheck { kmax, matrix, deviation })
}
