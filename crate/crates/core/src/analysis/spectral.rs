use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matcore::{eig_with, exact_sqrt, ComplexMatrix, Spectrum, Tolerances, C64};

/// Index of cyclicity, minimal-polynomial degree and discriminant of a
/// generator matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub dim: usize,
    pub spectrum: Spectrum,
    /// Largest geometric multiplicity: the minimal number of observables.
    pub eta: usize,
    /// Degree of the minimal polynomial.
    pub mu: usize,
    /// Product of squared eigenvalue differences over cluster
    /// representatives; exactly zero when any cluster is repeated.
    pub discriminant: C64,
    #[serde(with = "crate::matcore::extended_f64")]
    pub min_gap: f64,
    pub tolerance: Tolerances,
}

impl SpectralReport {
    pub fn is_optimal(&self) -> bool {
        self.eta == 1
    }

    /// Distinct eigenvalues (cluster representatives).
    pub fn distinct_eigenvalues(&self) -> Vec<C64> {
        self.spectrum.clusters.iter().map(|c| c.value).collect()
    }
}

pub fn spectral_report(l: &ComplexMatrix, tol: Tolerances) -> Result<SpectralReport> {
    let spectrum = eig_with(l, tol)?;
    Ok(report_from_spectrum(l, spectrum, tol))
}

pub(crate) fn report_from_spectrum(l: &ComplexMatrix, spectrum: Spectrum, tol: Tolerances) -> SpectralReport {
    let eta = spectrum.max_geometric();
    let mu = spectrum.minimal_polynomial_degree();
    let discriminant = clustered_discriminant(&spectrum);
    SpectralReport {
        dim: l.rows(),
        min_gap: spectrum.min_gap(),
        spectrum,
        eta,
        mu,
        discriminant,
        tolerance: tol,
    }
}

pub fn discriminant(l: &ComplexMatrix, tol: Tolerances) -> Result<C64> {
    Ok(clustered_discriminant(&eig_with(l, tol)?))
}

fn clustered_discriminant(spectrum: &Spectrum) -> C64 {
    let values: Vec<C64> = spectrum
        .clusters
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.value, c.algebraic))
        .collect();
    let mut d = C64::new(1.0, 0.0);
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            let diff = a - b;
            d *= diff * diff;
        }
    }
    d
}

/// `(L - cI)/r`, with c the centre of the spectrum's bounding box and r the
/// largest distance from it. Polynomial spans in this operator coincide with
/// those in `L` but are far better conditioned when the spectrum sits away
/// from the origin.
pub(crate) fn centred_operator(l: &ComplexMatrix, spectrum: &Spectrum) -> ComplexMatrix {
    let (c, r) = spectral_centre(spectrum);
    let n = l.rows();
    (l - &ComplexMatrix::identity(n).scale(c)).scale_real(1.0 / r)
}

pub(crate) fn spectral_centre(spectrum: &Spectrum) -> (C64, f64) {
    let ev = &spectrum.eigenvalues;
    let fold = |f: fn(f64, f64) -> f64, init: f64, part: fn(&C64) -> f64| ev.iter().map(part).fold(init, f);
    let re_lo = fold(f64::min, f64::INFINITY, |z| z.re);
    let re_hi = fold(f64::max, f64::NEG_INFINITY, |z| z.re);
    let im_lo = fold(f64::min, f64::INFINITY, |z| z.im);
    let im_hi = fold(f64::max, f64::NEG_INFINITY, |z| z.im);
    let c = C64::new(0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi));
    let r = ev.iter().map(|z| (z - c).norm()).fold(0.0, f64::max);
    (c, if r > 0.0 { r } else { 1.0 })
}

/// Evaluation of the three optimality criteria for a generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityReport {
    pub optimal: bool,
    pub eta: usize,
    pub eta_is_one: bool,
    pub mu: usize,
    /// Operator-space dimension n² of the generator's domain.
    pub operator_dim: usize,
    /// Whether μ = n² - 1, the reduced degree criterion.
    pub mu_equals_dim_minus_one: bool,
    /// Whether μ = n², the nonderogatory criterion.
    pub mu_equals_dim: bool,
    pub discriminant: C64,
    pub discriminant_nonzero: bool,
    /// Disagreements between the criteria, one line each.
    pub flags: Vec<String>,
}

pub fn optimality_report(l: &ComplexMatrix, tol: Tolerances) -> Result<OptimalityReport> {
    Ok(optimality_from(&spectral_report(l, tol)?))
}

pub fn optimality_from(report: &SpectralReport) -> OptimalityReport {
    let dim = report.dim;
    let eta_is_one = report.eta == 1;
    let discriminant_nonzero = report.discriminant != C64::new(0.0, 0.0);
    let mu_equals_dim_minus_one = report.mu + 1 == dim;
    let mu_equals_dim = report.mu == dim;
    let mut flags = Vec::new();
    if eta_is_one != discriminant_nonzero {
        flags.push(format!(
            "eta = {} but discriminant is {}",
            report.eta,
            if discriminant_nonzero { "nonzero" } else { "zero" }
        ));
    }
    if eta_is_one != mu_equals_dim_minus_one {
        flags.push(format!(
            "degree criterion mu = n^2 - 1 = {} disagrees with eta = {} (measured mu = {})",
            dim.saturating_sub(1),
            report.eta,
            report.mu
        ));
    }
    if eta_is_one != mu_equals_dim {
        flags.push(format!(
            "nonderogatory criterion mu = n^2 = {dim} disagrees with eta = {} (measured mu = {})",
            report.eta, report.mu
        ));
    }
    if exact_sqrt(dim).is_none() {
        flags.push(format!("generator dimension {dim} is not a perfect square"));
    }
    OptimalityReport {
        optimal: eta_is_one,
        eta: report.eta,
        eta_is_one,
        mu: report.mu,
        operator_dim: dim,
        mu_equals_dim_minus_one,
        mu_equals_dim,
        discriminant: report.discriminant,
        discriminant_nonzero,
        flags,
    }
}
