//! Closed-form energies for elliptic holes in elliptic coordinates
//! x₁ = c cosh ξ cos η, x₂ = c sinh ξ sin η, with the boundary at ξ = ξ̄.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::taylor::binomial;

/// ξ̄ = log((a + b)/c), c = √(a² − b²).
pub fn xi_bar(a: f64, b: f64) -> Result<f64> {
    if !(b > 0.0 && a > b) {
        return Err(Error::Domain(format!(
            "elliptic coordinates need a > b > 0 (a={a}, b={b}); use the disk limit for circles"
        )));
    }
    let c = (a * a - b * b).sqrt();
    Ok(((a + b) / c).ln())
}

fn pow2(e: i32) -> f64 {
    2f64.powi(e)
}

pub fn ck(k: usize) -> f64 {
    let s: f64 = (0..=k).map(|j| (k as f64 - 2.0 * j as f64).abs() * binomial(k, j).powi(2)).sum();
    s / pow2(2 * k as i32 - 1)
}

pub fn dk(k: usize, xi: f64) -> f64 {
    let s: f64 = (0..=k)
        .map(|j| {
            let m = k as f64 - 2.0 * j as f64;
            m.abs() * binomial(k, j).powi(2) * (2.0 * m * xi).exp()
        })
        .sum();
    s / pow2(2 * k as i32)
}

pub fn ek(k: usize, xi: f64) -> f64 {
    let s: f64 = (0..=k)
        .map(|j| {
            let m = k as f64 - 2.0 * j as f64;
            (m.abs() + m) * binomial(k, j).powi(2) * (2.0 * m * xi).exp()
        })
        .sum();
    s / pow2(2 * k as i32)
}

/// Polynomial form of c^{2k} E_k(ξ̄), regular at a = b.
pub fn qk(k: usize, a: f64, b: f64) -> f64 {
    let c2 = a * a - b * b;
    let s: f64 = (0..=(k - 1) / 2)
        .map(|j| {
            (k - 2 * j) as f64 * binomial(k, j).powi(2) * c2.powi(2 * j as i32) * (a + b).powi(2 * (k - 2 * j) as i32)
        })
        .sum();
    s / pow2(2 * k as i32 - 1)
}

/// E = −(πβ²c^{2k}/2) C_k cos 2kφ + πβ² Q_k(a, b).
pub fn angular_energy(k: usize, beta: f64, phi: f64, a: f64, b: f64) -> f64 {
    let c2k = (a * a - b * b).powi(k as i32);
    let kk = k as f64;
    -0.5 * PI * beta * beta * c2k * ck(k) * (2.0 * kk * phi).cos() + PI * beta * beta * qk(k, a, b)
}

/// Fourier data of the leading part on the ellipse boundary, in η.
#[derive(Clone, Debug)]
pub struct HoleFourier {
    /// cos(jη) coefficients, index j − 1.
    pub a: Vec<f64>,
    /// sin(jη) coefficients, index j − 1.
    pub b: Vec<f64>,
    /// π Σ j (a_j² + b_j²).
    pub exterior_energy: f64,
}

pub fn hole_fourier_coefficients(k: usize, beta: f64, phi: f64, a: f64, b: f64) -> Result<HoleFourier> {
    let xi = xi_bar(a, b)?;
    let c = (a * a - b * b).sqrt();
    let kk = k as f64;
    let pre = beta * c.powi(k as i32) / pow2(k as i32 - 1);
    let mut av = vec![0.0; k];
    let mut bv = vec![0.0; k];
    for j in 1..=k {
        if (k + j) % 2 == 1 {
            continue;
        }
        let bin = binomial(k, (k + j) / 2);
        let jf = j as f64;
        av[j - 1] = pre * (kk * phi).sin() * bin * (jf * xi).cosh();
        bv[j - 1] = pre * (kk * phi).cos() * bin * (jf * xi).sinh();
    }
    let exterior_energy = PI * (1..=k).map(|j| j as f64 * (av[j - 1].powi(2) + bv[j - 1].powi(2))).sum::<f64>();
    Ok(HoleFourier { a: av, b: bv, exterior_energy })
}

/// Exterior part −(πβ²c^{2k}/2) C_k cos 2kφ + πβ²c^{2k} D_k(ξ̄).
pub fn exterior_energy_closed_form(k: usize, beta: f64, phi: f64, a: f64, b: f64) -> Result<f64> {
    let xi = xi_bar(a, b)?;
    let c2k = (a * a - b * b).powi(k as i32);
    let kk = k as f64;
    Ok(-0.5 * PI * beta * beta * c2k * ck(k) * (2.0 * kk * phi).cos() + PI * beta * beta * c2k * dk(k, xi))
}
