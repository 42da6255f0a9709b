//! Second, independent evaluation path: the integral families written out
//! as explicit coupling sums over Gaunt coefficients.
//!
//! Every term is derived by expanding the operator products
//! `v† D (I+S') D (I+S') D v` and `tr(D (I+S') D (I+S') ...)` in powers of
//! S' and writing each S' entry as its Gaunt sum. In particular the quartic
//! term of I3 carries an independent summation over the intermediate basis
//! index and a second Gaunt factor W(l',m',l'',m'',l3,m3) — transcriptions
//! of this sum that reuse the outer index in the second factor do not
//! reproduce the operator product. The doubled sums here follow the
//! operator form; agreement with the banded trace path at matched cutoff is
//! part of the acceptance suite.

use num_complex::Complex;

use crate::harmonics::{Density, GauntTable};
use crate::scalar::{real, KahanSum, Real};

use super::integrals::truncated_z;
use super::sigma::lambda;

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// I2^(q,p) as the diagonal sum plus the cubic coupling sum.
pub fn nested_i2<T: Real>(d: &Density<T>, gaunt: &GauntTable<T>, q: u32, p: u32, l_max: u32) -> T {
    let mut diag = KahanSum::new();
    for (idx, c) in d.coefficients() {
        if idx.l <= l_max {
            diag.add(c.norm_sqr() * lambda::<T>(idx.l).powi(-(q as i32 + p as i32 + 2)));
        }
    }
    let mut cubic = zero::<T>();
    for (a, ca) in d.coefficients() {
        if a.l > l_max {
            continue;
        }
        for (b, cb) in d.coefficients() {
            if b.l > l_max {
                continue;
            }
            for (k, ck) in d.coefficients() {
                if a.m != b.m + k.m {
                    continue;
                }
                let w = gaunt.eval(a.l, a.m, b.l, b.m, k.l, k.m).unwrap();
                if w == T::zero() {
                    continue;
                }
                cubic += ca.conj()
                    * cb
                    * ck
                    * w
                    * lambda::<T>(a.l).powi(-(q as i32 + 1))
                    * lambda::<T>(b.l).powi(-(p as i32 + 1));
            }
        }
    }
    diag.add(cubic.re);
    diag.value()
}

/// I3^(q,p,r): diagonal, the two-bracket cubic term and the quartic term
/// with its free intermediate index.
pub fn nested_i3<T: Real>(
    d: &Density<T>,
    gaunt: &GauntTable<T>,
    q: u32,
    p: u32,
    r: u32,
    l_max: u32,
) -> T {
    let (qi, pi, ri) = (q as i32, p as i32, r as i32);
    let mut acc = KahanSum::new();
    for (idx, c) in d.coefficients() {
        if idx.l <= l_max {
            acc.add(c.norm_sqr() * lambda::<T>(idx.l).powi(-(qi + pi + ri + 3)));
        }
    }
    let mut cubic = zero::<T>();
    for (a, ca) in d.coefficients() {
        if a.l > l_max {
            continue;
        }
        for (b, cb) in d.coefficients() {
            if b.l > l_max {
                continue;
            }
            for (k, ck) in d.coefficients() {
                if a.m != b.m + k.m {
                    continue;
                }
                let w = gaunt.eval(a.l, a.m, b.l, b.m, k.l, k.m).unwrap();
                if w == T::zero() {
                    continue;
                }
                let la = lambda::<T>(a.l);
                let lb = lambda::<T>(b.l);
                let bracket =
                    la.powi(-(qi + 1)) * lb.powi(-(pi + ri + 2)) + la.powi(-(qi + pi + 2)) * lb.powi(-(ri + 1));
                cubic += ca.conj() * cb * ck * w * bracket;
            }
        }
    }
    acc.add(cubic.re);
    let mut quartic = zero::<T>();
    for (a, ca) in d.coefficients() {
        if a.l > l_max {
            continue;
        }
        for (c2, cc2) in d.coefficients() {
            let mp = a.m - c2.m;
            let lo = a.l.saturating_sub(c2.l).max(1);
            for lp in lo..=(a.l + c2.l).min(l_max) {
                if mp.unsigned_abs() > lp {
                    continue;
                }
                let w1 = gaunt.eval(a.l, a.m, lp, mp, c2.l, c2.m).unwrap();
                if w1 == T::zero() {
                    continue;
                }
                for (b, cb) in d.coefficients() {
                    if b.l > l_max {
                        continue;
                    }
                    for (c3, cc3) in d.coefficients() {
                        if mp != b.m + c3.m {
                            continue;
                        }
                        let w2 = gaunt.eval(lp, mp, b.l, b.m, c3.l, c3.m).unwrap();
                        if w2 == T::zero() {
                            continue;
                        }
                        quartic += ca.conj()
                            * cc2
                            * cc3
                            * cb
                            * w1
                            * w2
                            * lambda::<T>(a.l).powi(-(qi + 1))
                            * lambda::<T>(lp).powi(-(pi + 1))
                            * lambda::<T>(b.l).powi(-(ri + 1));
                    }
                }
            }
        }
    }
    acc.add(quartic.re);
    acc.value()
}

/// J1^(q,p) truncated at `l_max`: homogeneous sum, coupling term linear in
/// the coefficients, and the double Gaunt sum.
pub fn nested_j1<T: Real>(d: &Density<T>, gaunt: &GauntTable<T>, q: u32, p: u32, l_max: u32) -> T {
    let (qi, pi) = (q as i32, p as i32);
    let mut acc = KahanSum::new();
    acc.add(truncated_z::<T>(q + p + 2, l_max));
    let mut linear = zero::<T>();
    for l in 1..=l_max {
        let weight = lambda::<T>(l).powi(-(qi + pi + 2));
        for m in -(l as i32)..=(l as i32) {
            for (k, ck) in d.coefficients() {
                if k.m != 0 {
                    continue;
                }
                let w = gaunt.eval(l, m, l, m, k.l, k.m).unwrap();
                if w != T::zero() {
                    linear += ck * w * weight;
                }
            }
        }
    }
    acc.add(real::<T>(2.0) * linear.re);
    let mut quartic = zero::<T>();
    for l in 1..=l_max {
        for m in -(l as i32)..=(l as i32) {
            for (k1, ck1) in d.coefficients() {
                let mp = m - k1.m;
                let lo = l.saturating_sub(k1.l).max(1);
                for lp in lo..=(l + k1.l).min(l_max) {
                    if mp.unsigned_abs() > lp {
                        continue;
                    }
                    let w1 = gaunt.eval(l, m, lp, mp, k1.l, k1.m).unwrap();
                    if w1 == T::zero() {
                        continue;
                    }
                    for (k2, ck2) in d.coefficients() {
                        if k2.m != k1.m {
                            continue;
                        }
                        let w2 = gaunt.eval(l, m, lp, mp, k2.l, k2.m).unwrap();
                        if w2 == T::zero() {
                            continue;
                        }
                        quartic += ck2.conj()
                            * ck1
                            * (w1 * w2)
                            * lambda::<T>(l).powi(-(qi + 1))
                            * lambda::<T>(lp).powi(-(pi + 1));
                    }
                }
            }
        }
    }
    acc.add(quartic.re);
    acc.value()
}

/// J2^(q,p,r) truncated at `l_max`: homogeneous sum, three linear
/// placements, the three distinct quadratic placements and the triple
/// Gaunt loop.
pub fn nested_j2<T: Real>(
    d: &Density<T>,
    gaunt: &GauntTable<T>,
    q: u32,
    p: u32,
    r: u32,
    l_max: u32,
) -> T {
    let (qi, pi, ri) = (q as i32, p as i32, r as i32);
    let mut acc = KahanSum::new();
    acc.add(truncated_z::<T>(q + p + r + 3, l_max));
    let mut linear = zero::<T>();
    for l in 1..=l_max {
        let weight = lambda::<T>(l).powi(-(qi + pi + ri + 3));
        for m in -(l as i32)..=(l as i32) {
            for (k, ck) in d.coefficients() {
                if k.m != 0 {
                    continue;
                }
                let w = gaunt.eval(l, m, l, m, k.l, k.m).unwrap();
                if w != T::zero() {
                    linear += ck * w * weight;
                }
            }
        }
    }
    acc.add(real::<T>(3.0) * linear.re);
    // quadratic placements: the two propagators between the S' factors
    // collapse pairwise, giving three (a, b) weight patterns
    for (a, b) in [(qi + ri + 1, pi), (qi, pi + ri + 1), (qi + pi + 1, ri)] {
        let mut pair = zero::<T>();
        for l in 1..=l_max {
            for m in -(l as i32)..=(l as i32) {
                // k1 couples (l',m') back to (l,m): m' = m + m1
                for (k1, ck1) in d.coefficients() {
                    let mp = m + k1.m;
                    let lo = l.saturating_sub(k1.l).max(1);
                    for lp in lo..=(l + k1.l).min(l_max) {
                        if mp.unsigned_abs() > lp {
                            continue;
                        }
                        let w1 = gaunt.eval(lp, mp, l, m, k1.l, k1.m).unwrap();
                        if w1 == T::zero() {
                            continue;
                        }
                        for (k2, ck2) in d.coefficients() {
                            if k2.m != -k1.m {
                                continue;
                            }
                            let w2 = gaunt.eval(l, m, lp, mp, k2.l, k2.m).unwrap();
                            if w2 == T::zero() {
                                continue;
                            }
                            pair += ck1
                                * ck2
                                * (w1 * w2)
                                * lambda::<T>(l).powi(-(a + 1))
                                * lambda::<T>(lp).powi(-(b + 1));
                        }
                    }
                }
            }
        }
        acc.add(pair.re);
    }
    // sextic: closed loop of three S' factors
    let mut sextic = zero::<T>();
    for l in 1..=l_max {
        for m in -(l as i32)..=(l as i32) {
            for (k2, ck2) in d.coefficients() {
                let mp = m - k2.m;
                let lo_p = l.saturating_sub(k2.l).max(1);
                for lp in lo_p..=(l + k2.l).min(l_max) {
                    if mp.unsigned_abs() > lp {
                        continue;
                    }
                    let w2 = gaunt.eval(l, m, lp, mp, k2.l, k2.m).unwrap();
                    if w2 == T::zero() {
                        continue;
                    }
                    for (k3, ck3) in d.coefficients() {
                        let mpp = mp - k3.m;
                        let lo_pp = lp.saturating_sub(k3.l).max(1);
                        for lpp in lo_pp..=(lp + k3.l).min(l_max) {
                            if mpp.unsigned_abs() > lpp {
                                continue;
                            }
                            let w3 = gaunt.eval(lp, mp, lpp, mpp, k3.l, k3.m).unwrap();
                            if w3 == T::zero() {
                                continue;
                            }
                            for (k1, ck1) in d.coefficients() {
                                if k1.m != mpp - m {
                                    continue;
                                }
                                let w1 = gaunt.eval(lpp, mpp, l, m, k1.l, k1.m).unwrap();
                                if w1 == T::zero() {
                                    continue;
                                }
                                sextic += ck1
                                    * ck2
                                    * ck3
                                    * (w1 * w2 * w3)
                                    * lambda::<T>(l).powi(-(qi + 1))
                                    * lambda::<T>(lp).powi(-(pi + 1))
                                    * lambda::<T>(lpp).powi(-(ri + 1));
                            }
                        }
                    }
                }
            }
        }
    }
    acc.add(sextic.re);
    acc.value()
}
