use serde::{Deserialize, Serialize};

use crate::error::{Result, StrobeError};

/// Below this separation two parameters are treated as equal.
pub const DISTINCT_TOL: f64 = 1e-12;

/// Pauli-channel family on one qubit: K₀ ∝ I, K_i ∝ √a_i σ_i, decaying as
/// κ(t) = e^{-γt}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelParams {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub gamma: f64,
}

/// Gell-Mann family on a qutrit with six free weights; a7 and a8 follow
/// from trace preservation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeLevelParams {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    /// Nonnegativity, the trace bound and γ > 0.
    pub cptp_domain: bool,
    /// Pairwise distinctness of the weight list.
    pub nondegenerate: bool,
    /// Human-readable description of each violated constraint.
    pub violations: Vec<String>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.cptp_domain && self.nondegenerate
    }

    fn require_domain(&self) -> Result<()> {
        if self.cptp_domain {
            Ok(())
        } else {
            let msgs: Vec<&str> = self
                .violations
                .iter()
                .map(String::as_str)
                .filter(|v| !v.starts_with("distinctness"))
                .collect();
            Err(StrobeError::InvalidDomain(msgs.join("; ")))
        }
    }
}

fn check_gamma(gamma: f64, violations: &mut Vec<String>) {
    if !(gamma.is_finite() && gamma > 0.0) {
        violations.push(format!("gamma must be positive and finite, got {gamma}"));
    }
}

fn check_nonnegative(names: &[&str], values: &[f64], violations: &mut Vec<String>) {
    for (name, &v) in names.iter().zip(values) {
        if !v.is_finite() || v < 0.0 {
            violations.push(format!("nonnegativity: {name} = {v} must be >= 0"));
        }
    }
}

fn check_distinct(names: &[&str], values: &[f64], violations: &mut Vec<String>) -> bool {
    let mut ok = true;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if (values[i] - values[j]).abs() <= DISTINCT_TOL {
                ok = false;
                violations.push(format!(
                    "distinctness: {} = {} = {}",
                    names[i], names[j], values[i]
                ));
            }
        }
    }
    ok
}

impl TwoLevelParams {
    pub fn new(a1: f64, a2: f64, a3: f64, gamma: f64) -> Self {
        Self { a1, a2, a3, gamma }
    }

    pub fn weights(&self) -> [f64; 3] {
        [self.a1, self.a2, self.a3]
    }

    pub fn weight_sum(&self) -> f64 {
        self.a1 + self.a2 + self.a3
    }

    pub fn validate(&self) -> ValidityReport {
        let mut violations = Vec::new();
        let names = ["a1", "a2", "a3"];
        let w = self.weights();
        check_nonnegative(&names, &w, &mut violations);
        let sum = self.weight_sum();
        if !(sum <= 1.0) {
            violations.push(format!("sum bound: a1+a2+a3 = {sum} exceeds 1"));
        }
        check_gamma(self.gamma, &mut violations);
        let cptp_domain = violations.is_empty();
        let nondegenerate = check_distinct(&names, &w, &mut violations);
        ValidityReport {
            cptp_domain,
            nondegenerate,
            violations,
        }
    }

    pub(crate) fn require_domain(&self) -> Result<()> {
        self.validate().require_domain()
    }

    /// Eigenvalues of the generator in closed form:
    /// `{0, -2(a1+a2)γ, -2(a1+a3)γ, -2(a2+a3)γ}`.
    pub fn closed_form_spectrum(&self) -> [f64; 4] {
        let g = self.gamma;
        [
            0.0,
            -2.0 * (self.a1 + self.a2) * g,
            -2.0 * (self.a1 + self.a3) * g,
            -2.0 * (self.a2 + self.a3) * g,
        ]
    }
}

impl ThreeLevelParams {
    pub fn new(a: [f64; 6], gamma: f64) -> Self {
        let [a1, a2, a3, a4, a5, a6] = a;
        Self {
            a1,
            a2,
            a3,
            a4,
            a5,
            a6,
            gamma,
        }
    }

    pub fn a7(&self) -> f64 {
        self.a4 + self.a5 - self.a6
    }

    pub fn a8(&self) -> f64 {
        self.a1 + self.a2 + self.a3 - self.a4 - self.a5
    }

    pub fn free_weights(&self) -> [f64; 6] {
        [self.a1, self.a2, self.a3, self.a4, self.a5, self.a6]
    }

    /// All eight Gell-Mann weights, derived ones included.
    pub fn weights(&self) -> [f64; 8] {
        [
            self.a1,
            self.a2,
            self.a3,
            self.a4,
            self.a5,
            self.a6,
            self.a7(),
            self.a8(),
        ]
    }

    /// Total dissipation f = (2/3)(2a1+2a2+2a3+a4+a5).
    pub fn dissipation(&self) -> f64 {
        2.0 / 3.0 * (2.0 * (self.a1 + self.a2 + self.a3) + self.a4 + self.a5)
    }

    pub fn validate(&self) -> ValidityReport {
        let mut violations = Vec::new();
        let names = ["a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8"];
        let w = self.weights();
        check_nonnegative(&names, &w, &mut violations);
        let f = self.dissipation();
        if !(f <= 1.0) {
            violations.push(format!(
                "sum bound: (2/3)(2a1+2a2+2a3+a4+a5) = {f} exceeds 1"
            ));
        }
        check_gamma(self.gamma, &mut violations);
        let cptp_domain = violations.is_empty();
        let nondegenerate = check_distinct(&names, &w, &mut violations);
        ValidityReport {
            cptp_domain,
            nondegenerate,
            violations,
        }
    }

    pub(crate) fn require_domain(&self) -> Result<()> {
        self.validate().require_domain()
    }

    /// The nine generator eigenvalues in closed form, scaled by γ.
    pub fn closed_form_spectrum(&self) -> [f64; 9] {
        let Self {
            a1,
            a2,
            a3,
            a4,
            a5,
            a6,
            gamma,
        } = *self;
        let s = a1 + a2 + a3;
        [
            0.0,
            -2.0 * a1 - 2.0 * a2 - a4 - a5,
            -2.0 * a1 - 2.0 * a3 - a4 - a5,
            -2.0 * a2 - 2.0 * a3 - a4 - a5,
            -2.0 * s + a4 - a5,
            -2.0 * s - a4 + a5,
            -3.0 * (a4 + a5),
            -2.0 * s + a4 + a5 - 2.0 * a6,
            -2.0 * s - a4 - a5 + 2.0 * a6,
        ]
        .map(|x| x * gamma)
    }
}

pub fn validate_two_level(p: &TwoLevelParams) -> ValidityReport {
    p.validate()
}

pub fn validate_three_level(p: &ThreeLevelParams) -> ValidityReport {
    p.validate()
}

pub fn closed_form_spectrum_two_level(p: &TwoLevelParams) -> Vec<f64> {
    p.closed_form_spectrum().to_vec()
}

pub fn closed_form_spectrum_three_level(p: &ThreeLevelParams) -> Vec<f64> {
    p.closed_form_spectrum().to_vec()
}

/// One-parameter family as a special case: (a/3, (2-a)/3, 0).
pub fn embed_one_param(a: f64, gamma: f64) -> Result<TwoLevelParams> {
    if !(a > 0.0 && a < 2.0) {
        return Err(StrobeError::InvalidDomain(format!(
            "one-parameter family requires 0 < a < 2, got {a}"
        )));
    }
    Ok(TwoLevelParams::new(a / 3.0, (2.0 - a) / 3.0, 0.0, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_level_worked_example_valid() {
        let r = TwoLevelParams::new(0.1, 0.2, 0.3, 1.0).validate();
        assert!(r.cptp_domain && r.nondegenerate, "{r:?}");
        assert!(r.violations.is_empty());
    }

    #[test]
    fn two_level_equal_weights_degenerate() {
        let r = TwoLevelParams::new(0.2, 0.2, 0.3, 1.0).validate();
        assert!(r.cptp_domain);
        assert!(!r.nondegenerate);
    }

    #[test]
    fn two_level_sum_bound_named() {
        let r = TwoLevelParams::new(0.5, 0.4, 0.3, 1.0).validate();
        assert!(!r.cptp_domain);
        assert!(r.violations.iter().any(|v| v.contains("a1+a2+a3")));
        let neg = TwoLevelParams::new(-0.1, 0.4, 0.3, 1.0).validate();
        assert!(!neg.cptp_domain);
        assert!(!TwoLevelParams::new(0.1, 0.2, 0.3, 0.0).validate().cptp_domain);
    }

    #[test]
    fn three_level_worked_example() {
        let p = ThreeLevelParams::new([0.1, 0.15, 0.2, 0.05, 0.08, 0.06], 1.0);
        assert!((p.a7() - 0.07).abs() < 1e-15);
        assert!((p.a8() - 0.32).abs() < 1e-15);
        // (2/3)(0.9 + 0.13)
        assert!((p.dissipation() - 2.06 / 3.0).abs() < 1e-15);
        let r = p.validate();
        assert!(r.cptp_domain && r.nondegenerate, "{r:?}");
    }

    #[test]
    fn three_level_derived_weight_negative() {
        // a7 = 0.05 + 0.01 - 0.08 < 0
        let p = ThreeLevelParams::new([0.1, 0.15, 0.2, 0.05, 0.01, 0.08], 1.0);
        let r = p.validate();
        assert!(!r.cptp_domain);
        assert!(r.violations.iter().any(|v| v.contains("a7")));
    }

    #[test]
    fn closed_form_two_level() {
        assert_eq!(
            TwoLevelParams::new(0.1, 0.2, 0.3, 2.0).closed_form_spectrum().map(|x| (x * 1e12).round() / 1e12),
            [0.0, -1.2, -1.6, -2.0]
        );
        let s = TwoLevelParams::new(0.2, 0.2, 0.3, 1.0).closed_form_spectrum();
        assert!((s[1] + 0.8).abs() < 1e-15 && (s[2] + 1.0).abs() < 1e-15 && (s[3] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_three_level_worked_example() {
        let p = ThreeLevelParams::new([0.1, 0.15, 0.2, 0.05, 0.08, 0.06], 1.0);
        let expected = [0.0, -0.63, -0.73, -0.83, -0.93, -0.87, -0.39, -0.89, -0.91];
        for (got, want) in p.closed_form_spectrum().iter().zip(expected) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn embedding() {
        let p = embed_one_param(0.5, 1.0).unwrap();
        assert!((p.a1 - 1.0 / 6.0).abs() < 1e-16 && (p.a2 - 0.5).abs() < 1e-16 && p.a3 == 0.0);
        assert!(p.validate().nondegenerate);
        let p = embed_one_param(1.0, 1.0).unwrap();
        assert!(!p.validate().nondegenerate);
        assert!(embed_one_param(2.0, 1.0).is_err());
        assert!(embed_one_param(0.0, 1.0).is_err());
    }
}
