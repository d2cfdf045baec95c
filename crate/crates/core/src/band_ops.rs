//! Sublattice ladder operators σ± expressed in the band eigenbasis.
//!
//! The ground truth is the outer-product construction: the sublattice kets
//! |A⟩, |B⟩ are expanded in the band basis {|+⟩, |−⟩} and σ₊ = |A⟩⟨B|,
//! σ₋ = |B⟩⟨A| are assembled from those expansions. A tabulated closed form
//! for the matrix elements exists in the source material but fails the
//! round-trip check; it is kept in the verification report as a documented
//! comparison, never used for computation.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::chi::ChiPair;
use crate::electron::Sign;

type C64 = Complex64;

/// Which ladder operator: σ₊ or σ₋.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Plus,
    Minus,
}

/// A 2×2 operator in the band eigenbasis {|+⟩, |−⟩} of one layer.
#[derive(Debug, Clone, PartialEq)]
pub struct BandOperator(pub Matrix2<C64>);

impl BandOperator {
    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    pub fn adjoint(&self) -> BandOperator {
        BandOperator(self.0.adjoint())
    }
}

/// Sublattice kets |A⟩ and |B⟩ expanded in the band basis, for momentum
/// azimuth `angle`:
///   |A⟩ = (χ₊√(1+χ₋²)|−⟩ − χ₋√(1+χ₊²)|+⟩)/Δχ
///   |B⟩ = e^{−iφ}(√(1+χ₊²)|+⟩ − √(1+χ₋²)|−⟩)/Δχ
/// Components ordered (|+⟩, |−⟩).
pub fn sublattice_kets(chi: &ChiPair, angle: f64) -> (Vector2<C64>, Vector2<C64>) {
    let (cp, cm, dc) = (chi.chi_plus, chi.chi_minus, chi.delta_chi);
    let sp = (1.0 + cp * cp).sqrt();
    let sm = (1.0 + cm * cm).sqrt();
    let a = Vector2::new(C64::new(-cm * sp / dc, 0.0), C64::new(cp * sm / dc, 0.0));
    let phase = C64::from_polar(1.0, -angle);
    let b = Vector2::new(phase * (sp / dc), phase * (-sm / dc));
    (a, b)
}

/// Unitary change of basis whose columns are |A⟩ and |B⟩ in band-basis
/// coordinates. Conjugating a sublattice-basis operator with it yields the
/// band-basis representation.
pub fn sublattice_to_band(chi: &ChiPair, angle: f64) -> Matrix2<C64> {
    let (a, b) = sublattice_kets(chi, angle);
    Matrix2::from_columns(&[a, b])
}

/// σ₊ = |A⟩⟨B| (or σ₋ = |B⟩⟨A|) in the band basis.
pub fn sigma_band_operator(polarity: Polarity, chi: &ChiPair, angle: f64) -> BandOperator {
    let (a, b) = sublattice_kets(chi, angle);
    let m = match polarity {
        Polarity::Plus => a * b.adjoint(),
        Polarity::Minus => b * a.adjoint(),
    };
    BandOperator(m)
}

/// Matrix element ⟨ν′| σ_λ |ν⟩ from the tabulated closed form
/// e^{iλφ}/(2Δχ) · ν′ √((1+χ_{ν′}²)/(1+χ_ν²)) · [(1−λ) − (1−λ) χ_{−ν′} χ_ν].
///
/// Retained verbatim for the verification report; compare against
/// [`sigma_band_operator`] before trusting it.
pub fn sigma_tabulated_element(
    lambda: Sign,
    chi: &ChiPair,
    angle: f64,
    to: Sign,
    from: Sign,
) -> C64 {
    let lam = lambda.value();
    let phase = C64::from_polar(1.0, lam * angle);
    let ratio = ((1.0 + chi.by_band(to).powi(2)) / (1.0 + chi.by_band(from).powi(2))).sqrt();
    let bracket = (1.0 - lam) - (1.0 - lam) * chi.by_band(to.flip()) * chi.by_band(from);
    phase * (to.value() * ratio * bracket / (2.0 * chi.delta_chi))
}

/// Full 2×2 matrix of the tabulated closed form, ordered (|+⟩, |−⟩).
pub fn sigma_tabulated(lambda: Sign, chi: &ChiPair, angle: f64) -> Matrix2<C64> {
    let e = |to, from| sigma_tabulated_element(lambda, chi, angle, to, from);
    Matrix2::new(
        e(Sign::Plus, Sign::Plus),
        e(Sign::Plus, Sign::Minus),
        e(Sign::Minus, Sign::Plus),
        e(Sign::Minus, Sign::Minus),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chi::ChiPair;

    fn max_abs(m: &Matrix2<C64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn kets_are_orthonormal() {
        let chi = ChiPair::new(0.8, 0.33).unwrap();
        let (a, b) = sublattice_kets(&chi, 1.2);
        assert!((a.dot(&a.map(|z| z.conj())).norm() - 1.0).abs() < 1e-14);
        assert!((b.dot(&b.map(|z| z.conj())).norm() - 1.0).abs() < 1e-14);
        assert!(a.dotc(&b).norm() < 1e-14);
    }

    #[test]
    fn gapless_sigma_plus_matrix() {
        // Δ = 0, φ = 0: the outer product evaluates to (1/2)[[1, −1], [1, −1]]
        let chi = ChiPair::new(1.0, 0.0).unwrap();
        let s = sigma_band_operator(Polarity::Plus, &chi, 0.0);
        let expected = Matrix2::new(
            C64::new(0.5, 0.0),
            C64::new(-0.5, 0.0),
            C64::new(0.5, 0.0),
            C64::new(-0.5, 0.0),
        );
        assert!(max_abs(&(s.0 - expected)) < 1e-14);
    }

    #[test]
    fn sigma_minus_is_adjoint_of_sigma_plus() {
        let chi = ChiPair::new(3.0, 4.0).unwrap();
        let sp = sigma_band_operator(Polarity::Plus, &chi, 0.7);
        let sm = sigma_band_operator(Polarity::Minus, &chi, 0.7);
        assert!(max_abs(&(sm.0 - sp.0.adjoint())) < 1e-14);
    }

    #[test]
    fn ladder_pair_anticommutes_to_identity() {
        for (eps, delta, phi) in [(1.0, 0.0, 0.3), (3.0, 4.0, 0.7), (0.2, -1.5, -2.0)] {
            let chi = ChiPair::new(eps, delta).unwrap();
            let sp = sigma_band_operator(Polarity::Plus, &chi, phi).0;
            let sm = sigma_band_operator(Polarity::Minus, &chi, phi).0;
            let anti = sp * sm + sm * sp;
            assert!(max_abs(&(anti - Matrix2::identity())) < 1e-12);
        }
    }

    #[test]
    fn round_trip_to_sublattice_basis() {
        // T† σ₊ T must recover the sublattice ladder [[0, 1], [0, 0]]
        let chi = ChiPair::new(0.9, 2.4).unwrap();
        let t = sublattice_to_band(&chi, -0.4);
        let sp = sigma_band_operator(Polarity::Plus, &chi, -0.4).0;
        let back = t.adjoint() * sp * t;
        let ladder = Matrix2::new(
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        );
        assert!(max_abs(&(back - ladder)) < 1e-12);
    }

    #[test]
    fn tabulated_form_disagrees_with_outer_product() {
        // The tabulated matrix elements annihilate everything for λ = +1,
        // which cannot reproduce the ladder pair. This pins the discrepancy
        // that the verification report documents.
        let chi = ChiPair::new(1.0, 0.6).unwrap();
        let lit = sigma_tabulated(Sign::Plus, &chi, 0.4);
        assert!(max_abs(&lit) < 1e-14);
        let outer = sigma_band_operator(Polarity::Plus, &chi, 0.4).0;
        assert!(max_abs(&(lit - outer)) > 0.1);
    }
}
