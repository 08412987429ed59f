use core::f64::consts::PI;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;
use crate::vector::FourVector;

/// One frequency of a fluctuation–dissipation pair.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SpectralPoint {
    pub omega: f64,
    /// Commutator spectrum `ξ[k]`.
    pub xi: f64,
    /// Temperature in energy units; zero for the vacuum.
    pub temperature: f64,
    /// Correlation spectrum `C[k]`.
    pub c: f64,
    /// Anticommutator spectrum `σ[k]`.
    pub sigma: f64,
}

/// `C = 2ħξ / (1 − e^{−ħω/T})`, `σ = coth(ħω/2T) ξ`; `T ≤ 0` gives the
/// vacuum relations.
pub fn thermal_spectra(xi: f64, omega: f64, temperature: f64, hbar: f64) -> Result<SpectralPoint> {
    if temperature <= 0.0 {
        return vacuum_spectra(xi, omega, hbar);
    }
    if omega == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    let x = hbar * omega / temperature;
    Ok(SpectralPoint {
        omega,
        xi,
        temperature,
        c: 2.0 * hbar * xi / -math::expm1(-x),
        sigma: xi / math::tanh(0.5 * x),
    })
}

/// `C = 2ħ θ(ω) ξ`, `σ = sgn(ω) ξ`.
pub fn vacuum_spectra(xi: f64, omega: f64, hbar: f64) -> Result<SpectralPoint> {
    if omega == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    let positive = omega > 0.0;
    Ok(SpectralPoint {
        omega,
        xi,
        temperature: 0.0,
        c: if positive { 2.0 * hbar * xi } else { 0.0 },
        sigma: if positive { xi } else { -xi },
    })
}

/// `π sgn(ω) δ(k²)` with the delta replaced by a unit Lorentzian of the
/// given width.
pub fn scalar_commutator_spectrum(k: &FourVector, width: f64) -> Result<f64> {
    if !(width > 0.0) {
        return Err(Error::InvalidInput("width must be positive"));
    }
    let k2 = k.square();
    let lorentzian = (width / PI) / (k2 * k2 + width * width);
    Ok(PI * math::sgn(k.t()) * lorentzian)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymptotes() {
        let p = thermal_spectra(0.7, 1.0, 1e-3, 1.0).unwrap();
        assert!((p.sigma - 0.7).abs() < 1e-15);
        assert!((p.c - 1.4).abs() < 1e-15);
        let p = thermal_spectra(0.7, 1e-3, 10.0, 1.0).unwrap();
        assert!((p.sigma / (2.0 * 10.0 / 1e-3 * 0.7) - 1.0).abs() < 1e-6);
        let p = thermal_spectra(0.7, -1.0, 1e-4, 1.0).unwrap();
        assert!(p.c.abs() < 1e-300);
    }

    #[test]
    fn consistency() {
        for (w, t) in [(1.0, 0.3), (-2.0, 1.5), (0.5, 7.0)] {
            let p = thermal_spectra(1.3, w, t, 0.8).unwrap();
            assert!((p.c - 0.8 * (p.sigma + p.xi)).abs() < 1e-12);
        }
    }

    #[test]
    fn vacuum() {
        assert_eq!(vacuum_spectra(0.5, 2.0, 1.0).unwrap().c, 1.0);
        assert_eq!(vacuum_spectra(0.5, 2.0, 1.0).unwrap().sigma, 0.5);
        let n = vacuum_spectra(0.5, -2.0, 1.0).unwrap();
        assert_eq!((n.c, n.sigma), (0.0, -0.5));
        let z = vacuum_spectra(0.0, 1.0, 1.0).unwrap();
        assert_eq!((z.c, z.sigma), (0.0, 0.0));
        assert_eq!(vacuum_spectra(1.0, 0.0, 1.0), Err(Error::ZeroFrequency));
        assert_eq!(thermal_spectra(1.0, 0.0, 1.0, 1.0), Err(Error::ZeroFrequency));
        assert_eq!(thermal_spectra(1.0, -3.0, 0.0, 1.0).unwrap().c, 0.0);
    }

    #[test]
    fn commutator_spectrum() {
        let w = 1e-3;
        let on = scalar_commutator_spectrum(&FourVector::new(1.0, 1.0, 0.0, 0.0), w).unwrap();
        assert!((on - 1.0 / w).abs() < 1e-9);
        let neg = scalar_commutator_spectrum(&FourVector::new(-1.0, 1.0, 0.0, 0.0), w).unwrap();
        assert_eq!(neg, -on);
        let off = scalar_commutator_spectrum(&FourVector::new(2.0, 0.0, 0.0, 0.0), w).unwrap();
        assert!(off.abs() < 1e-4);
    }
}
