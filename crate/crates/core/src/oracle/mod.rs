//! Brute-force verification of the coefficient-space engine.
//!
//! The bilinear integrals ∫∫ Σ f(x(Ω,Ω')) Σ dΩ dΩ' are evaluated from
//! pointwise density values and the closed-form kernels only — no Gaunt
//! coefficients anywhere. For each outer node the inner integral reduces,
//! in a frame aligned with the outer point, to the azimuthal average of Σ
//! (a polynomial of the density's band-limited degree) against the zonal
//! kernel, so only 1-D kernel moments ∫ f(u) P_l(u) du are needed. The
//! kernel's logarithmic part has known moments
//! ∫ ln(1-u) P_l du = -2/(l(l+1)); the rest is adaptive quadrature with
//! refinement toward the coincidence point.

use crate::error::{GreensError, QuadError};
use crate::greens::{green_closed, GeodesicCosine, GreenOrder};
use crate::harmonics::Density;
use crate::quad::{integrate_adaptive, GaussLegendre, SphereGrid};
use crate::scalar::{real, KahanSum, Real};
use crate::special::legendre_pl;

/// Σ w_i f(θ_i, φ_i) over a sphere grid.
pub fn integrate_sphere<T: Real, F: Fn(T, T) -> T>(grid: &SphereGrid<T>, f: F) -> T {
    grid.integrate(f)
}

/// An oracle result with its own convergence estimate.
#[derive(Debug, Clone, Copy)]
pub struct OracleValue<T> {
    pub value: T,
    pub estimate: T,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Greens(#[from] GreensError),
}

/// ∫ ln(1-u) P_l(u) du on [-1, 1].
fn log_moment<T: Real>(l: u32) -> T {
    if l == 0 {
        real::<T>(2.0) * (real::<T>(2.0).ln() - T::one())
    } else {
        real::<T>(-2.0) / real::<T>((l * (l + 1)) as f64)
    }
}

/// ∫ ln²(1-u) P_l(u) du on [-1, 1], exactly: substituting t = 1-u and
/// expanding P_l(1-t) = Σ_k C(l,k) C(l+k,k) (-t/2)^k reduces it to
/// ∫_0^2 t^k ln²t dt = 2^{k+1} (ln²2/(k+1) - 2 ln2/(k+1)² + 2/(k+1)³).
fn log_squared_moment<T: Real>(l: u32) -> T {
    let ln2 = real::<T>(2.0).ln();
    let mut acc = T::zero();
    let mut coeff = 1.0f64; // C(l,k) C(l+k,k) / (-2)^k
    for k in 0..=l {
        let kp1 = real::<T>(k as f64 + 1.0);
        let int = real::<T>(2.0f64.powi(k as i32 + 1))
            * (ln2 * ln2 / kp1 - real::<T>(2.0) * ln2 / (kp1 * kp1)
                + real::<T>(2.0) / (kp1 * kp1 * kp1));
        acc = acc + real::<T>(coeff) * int;
        let kf = k as f64;
        let lf = l as f64;
        coeff *= -(lf - kf) * (lf + kf + 1.0) / (2.0 * (kf + 1.0) * (kf + 1.0));
    }
    acc
}

fn quarter_pi_inv<T: Real>() -> T {
    (real::<T>(4.0) * T::PI()).recip()
}

fn closed<T: Real>(q: u32, u: T) -> T {
    green_closed(
        GreenOrder::from_q(q).expect("orders 0..=2"),
        GeodesicCosine::new(u).expect("interior node"),
    )
    .expect("interior node is regular")
}

/// Moments ∫ G^(q)(u) P_l(u) du for l = 0..=l_max.
///
/// Order zero is fully analytic through the log moments; orders one and two
/// go through adaptive quadrature (this is the independent check of the
/// closed forms).
pub fn greens_moments<T: Real>(q: u32, l_max: u32, tol: T) -> Result<Vec<T>, OracleError> {
    let mut out = Vec::with_capacity(l_max as usize + 1);
    for l in 0..=l_max {
        let m = match q {
            0 => {
                let c0 = quarter_pi_inv::<T>() * (real::<T>(2.0).ln() - T::one());
                let const_part = if l == 0 { real::<T>(2.0) * c0 } else { T::zero() };
                const_part - quarter_pi_inv::<T>() * log_moment::<T>(l)
            }
            _ => integrate_adaptive(
                &|u: T| closed(q, u) * legendre_pl(l, u),
                -T::one(),
                T::one(),
                tol,
            )?,
        };
        out.push(m);
    }
    Ok(out)
}

/// Moments of the product kernel G^(q) G^(p), the singular factors handled
/// by the log-moment subtraction.
pub fn product_moments<T: Real>(q: u32, p: u32, l_max: u32, tol: T) -> Result<Vec<T>, OracleError> {
    let (q, p) = (q.min(p), q.max(p));
    let c0 = quarter_pi_inv::<T>() * (real::<T>(2.0).ln() - T::one());
    let mut out = Vec::with_capacity(l_max as usize + 1);
    for l in 0..=l_max {
        let m = if q == 0 && p == 0 {
            // (c0 - ln(1-u)/4π)²: constant, single-log and squared-log parts,
            // all with closed-form moments
            let const_part = if l == 0 { real::<T>(2.0) * c0 * c0 } else { T::zero() };
            let single = real::<T>(-2.0) * c0 * quarter_pi_inv::<T>() * log_moment::<T>(l);
            let squared =
                quarter_pi_inv::<T>() * quarter_pi_inv::<T>() * log_squared_moment::<T>(l);
            const_part + single + squared
        } else if q == 0 {
            let smooth = integrate_adaptive(
                &|u: T| closed(p, u) * legendre_pl(l, u),
                -T::one(),
                T::one(),
                tol,
            )?;
            let logged = integrate_adaptive(
                &|u: T| (T::one() - u).ln() * closed(p, u) * legendre_pl(l, u),
                -T::one(),
                T::one(),
                tol,
            )?;
            c0 * smooth - quarter_pi_inv::<T>() * logged
        } else {
            integrate_adaptive(
                &|u: T| closed(q, u) * closed(p, u) * legendre_pl(l, u),
                -T::one(),
                T::one(),
                tol,
            )?
        };
        out.push(m);
    }
    Ok(out)
}

/// ∫∫ Σ(Ω) f(x(Ω,Ω')) Σ(Ω') dΩ dΩ' from the kernel moments.
fn zonal_bilinear<T: Real>(d: &Density<T>, moments: &[T], outer: &SphereGrid<T>) -> T {
    let band = d.band_limit();
    debug_assert!(moments.len() > band as usize);
    let u_rule = GaussLegendre::<T>::new(band as usize + 2);
    let n_phi = (2 * band + 3) as usize;
    let mut total = KahanSum::new();
    for (theta, phi, w) in outer.points() {
        let axis = unit_vector(theta, phi);
        let (e1, e2) = tangent_frame(axis);
        // azimuthal average of Σ about the outer point, at each u node
        let mut j_inner = T::zero();
        for (&u, &wu) in u_rule.nodes().iter().zip(u_rule.weights()) {
            let s = (T::one() - u * u).max(T::zero()).sqrt();
            let mut avg = T::zero();
            for k in 0..n_phi {
                let ang = real::<T>(2.0) * T::PI() * real::<T>(k as f64) / real::<T>(n_phi as f64);
                let point = [
                    s * ang.cos() * e1[0] + s * ang.sin() * e2[0] + u * axis[0],
                    s * ang.cos() * e1[1] + s * ang.sin() * e2[1] + u * axis[1],
                    s * ang.cos() * e1[2] + s * ang.sin() * e2[2] + u * axis[2],
                ];
                let t = point[2].max(-T::one()).min(T::one()).acos();
                let p = point[1].atan2(point[0]);
                avg += d.eval(t, p);
            }
            avg = avg / real::<T>(n_phi as f64);
            // project the average onto Legendre polynomials and contract
            // with the kernel moments
            let mut kernel_of_u = T::zero();
            for (l, &m) in moments.iter().enumerate().take(band as usize + 1) {
                let bl = real::<T>((2 * l + 1) as f64) * real::<T>(0.5) * legendre_pl(l as u32, u);
                kernel_of_u += bl * m;
            }
            j_inner += wu * avg * kernel_of_u;
        }
        total.add(w * d.eval(theta, phi) * (real::<T>(2.0) * T::PI()) * j_inner);
    }
    total.value()
}

fn unit_vector<T: Real>(theta: T, phi: T) -> [T; 3] {
    let st = theta.sin();
    [st * phi.cos(), st * phi.sin(), theta.cos()]
}

fn tangent_frame<T: Real>(axis: [T; 3]) -> ([T; 3], [T; 3]) {
    let helper = if axis[2].abs() < real(0.9) {
        [T::zero(), T::zero(), T::one()]
    } else {
        [T::one(), T::zero(), T::zero()]
    };
    let mut e1 = cross(helper, axis);
    let norm = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    for v in &mut e1 {
        *v = *v / norm;
    }
    let e2 = cross(axis, e1);
    (e1, e2)
}

fn cross<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Brute-force I1^(q) = ∫∫ Σ G^(q) Σ with a refinement estimate.
pub fn oracle_i1<T: Real>(
    d: &Density<T>,
    q: u32,
    grid: &SphereGrid<T>,
    refined: &SphereGrid<T>,
) -> Result<OracleValue<T>, OracleError> {
    let tol = real::<T>(1e-9);
    let moments = greens_moments(q, d.band_limit(), tol)?;
    let coarse = zonal_bilinear(d, &moments, grid);
    let value = zonal_bilinear(d, &moments, refined);
    Ok(OracleValue {
        value,
        estimate: (value - coarse).abs() + tol,
    })
}

/// Brute-force J1^(q,p) = ∫∫ Σ G^(q) G^(p) Σ with a refinement estimate.
pub fn oracle_j1<T: Real>(
    d: &Density<T>,
    q: u32,
    p: u32,
    grid: &SphereGrid<T>,
    refined: &SphereGrid<T>,
) -> Result<OracleValue<T>, OracleError> {
    let tol = real::<T>(1e-9);
    let moments = product_moments(q, p, d.band_limit(), tol)?;
    let coarse = zonal_bilinear(d, &moments, grid);
    let value = zonal_bilinear(d, &moments, refined);
    Ok(OracleValue {
        value,
        estimate: (value - coarse).abs() + tol,
    })
}
