//! Weight sequences for weighted Hardy spaces and their growth classification.
//!
//! A weight sequence is determined by a rule `k ↦ w_k > 0` for `k ≥ 1`;
//! the induced basis weights are `β_0 = 1`, `β_k = β_{k−1} w_k`. Presets:
//!
//! - `hardy`: `w_k ≡ 1` (classical Hardy space, `β_k = 1`),
//! - `dirichlet(λ)`: `w_k = √((k + 2λ + 1)/(k + 1))` (weighted Dirichlet),
//! - `dn1(N)`: `w_k = (k + N)/k`, so `β_k = C(N+k, k)`,
//! - `dn2(N)`: `w_k = ((k + 1)/k)^N`, so `β_k = (k + 1)^N`,
//! - `custom`: an explicit head list with tail rule `w_k = 1`.
//!
//! The inverse space (weights `1/w_k`) and the shifted lift
//! `β̃_n = (n + 1) β_n` are represented by the same type, so every operator
//! builder works uniformly on derived spaces.

use std::sync::Mutex;



use crate::error::{Error, Result};
use crate::exact::{rat_int, binomial_rat};
use crate::Rat;

/// Default number of probe indices used by [`WeightSequence::classify_growth`].
pub const DEFAULT_PROBE_LIMIT: usize = 100_000;

/// Relative stabilization tolerance for the running-sup probe: the sequence
/// counts as stabilized when the sup over all probes exceeds the sup over the
/// first half by at most this relative factor. A strict no-increase test would
/// misclassify weights whose ratio `(k+1)(w_k − 1)` increases monotonically to
/// a finite limit, which is exactly the behavior of the Dirichlet presets.
pub const STABILIZATION_RTOL: f64 = 1e-3;

/// Growth classification outcome of a probe run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum GrowthClass {
    /// The running sup of `(k+1)|w_k − 1|` stabilized: the weight behaves
    /// like a polynomial-growth weight over the probed range.
    PolynomialGrowth,
    /// The running sup kept growing: no polynomial-growth certificate.
    IntermediateGrowthSuspected,
}

/// Result of probing `(k+1)|w_k − 1|` over a finite index range.
///
/// The report is a probe, not a proof: `sup_probe` is exact over the probed
/// range, and `m_estimate` is the smallest `M ≥ 0` such that
/// `(k+1)/(k+M+1) ≤ w_k ≤ (k+M+1)/(k+1)` holds at every probed `k`
/// (present only when the classification is [`GrowthClass::PolynomialGrowth`]).
#[derive(Clone, Debug, serde::Serialize)]
pub struct GrowthReport {
    /// `max_{1 ≤ k ≤ probe_limit} (k+1)|w_k − 1|`.
    pub sup_probe: f64,
    /// Number of probed indices.
    pub probe_limit: usize,
    /// Stabilization verdict for the running sup.
    pub classification: GrowthClass,
    /// Two-sided growth-order estimate, `None` when not stabilized.
    pub m_estimate: Option<f64>,
}

/// Weight rule; `Inverse` and `Tilde` wrap a base rule so derived spaces
/// reuse the same machinery.
#[derive(Clone, Debug, PartialEq)]
enum Rule {
    Hardy,
    Dirichlet { lambda: f64 },
    Dn1 { n: u32 },
    Dn2 { n: u32 },
    Custom { head: Vec<f64> },
    Inverse(Box<Rule>),
    Tilde(Box<Rule>),
}

impl Rule {
    fn w(&self, k: usize) -> f64 {
        debug_assert!(k >= 1);
        let kf = k as f64;
        match self {
            Rule::Hardy => 1.0,
            Rule::Dirichlet { lambda } => ((kf + 2.0 * lambda + 1.0) / (kf + 1.0)).sqrt(),
            Rule::Dn1 { n } => (kf + f64::from(*n)) / kf,
            Rule::Dn2 { n } => ((kf + 1.0) / kf).powi(*n as i32),
            Rule::Custom { head } => head.get(k - 1).copied().unwrap_or(1.0),
            Rule::Inverse(inner) => 1.0 / inner.w(k),
            Rule::Tilde(inner) => inner.w(k) * (kf + 1.0) / kf,
        }
    }

    fn label(&self) -> String {
        match self {
            Rule::Hardy => "hardy".into(),
            Rule::Dirichlet { lambda } => format!("dirichlet:lambda={lambda}"),
            Rule::Dn1 { n } => format!("dn1:n={n}"),
            Rule::Dn2 { n } => format!("dn2:n={n}"),
            Rule::Custom { .. } => "custom".into(),
            Rule::Inverse(inner) => format!("inverse({})", inner.label()),
            Rule::Tilde(inner) => format!("tilde({})", inner.label()),
        }
    }

    /// Exact `β_k²` where the closed form is rational.
    fn beta_sq_exact(&self, k: usize) -> Option<Rat> {
        match self {
            Rule::Hardy => Some(rat_int(1)),
            Rule::Dirichlet { lambda } => {
                // Rational only for integer λ: β_k² = ∏_{j=1..k} (j+2λ+1)/(j+1).
                let li = lambda.round();
                if (lambda - li).abs() > 1e-12 || li < 0.0 || li > 1e6 {
                    return None;
                }
                let two_lambda = 2 * (li as i64);
                let mut acc = rat_int(1);
                for j in 1..=k as i64 {
                    acc *= Rat::new((j + two_lambda + 1).into(), (j + 1).into());
                }
                Some(acc)
            }
            Rule::Dn1 { n } => {
                let b = binomial_rat(u64::from(*n) + k as u64, k as u64);
                Some(b.clone() * b)
            }
            Rule::Dn2 { n } => {
                let base = rat_int(k as i64 + 1);
                let mut acc = rat_int(1);
                for _ in 0..(2 * n) {
                    acc *= base.clone();
                }
                Some(acc)
            }
            Rule::Custom { .. } => None,
            Rule::Inverse(inner) => inner.beta_sq_exact(k).map(|b| rat_int(1) / b),
            Rule::Tilde(inner) => {
                let shift = rat_int(k as i64 + 1);
                inner.beta_sq_exact(k).map(|b| shift.clone() * shift * b)
            }
        }
    }

    /// Growth order where known in closed form: the limit of `(k+1)(w_k − 1)`
    /// is 0 / λ / N / N for the four base presets.
    fn known_growth_order(&self) -> Option<u32> {
        match self {
            Rule::Hardy => Some(0),
            Rule::Dirichlet { lambda } => Some(lambda.ceil() as u32),
            Rule::Dn1 { n } | Rule::Dn2 { n } => Some(*n),
            Rule::Custom { .. } => None,
            // |(k+1)(1/w − 1)| has the same order as |(k+1)(w − 1)|.
            Rule::Inverse(inner) => inner.known_growth_order(),
            // The extra factor (k+1)/k contributes one more power.
            Rule::Tilde(inner) => inner.known_growth_order().map(|n| n + 1),
        }
    }
}

/// A weight sequence with cached `β` values.
///
/// Immutable after construction; the `β` cache is grown lazily under a lock,
/// so values are safe to share across sweep workers.
#[derive(Debug)]
pub struct WeightSequence {
    rule: Rule,
    label: String,
    betas: Mutex<Vec<f64>>,
}

impl Clone for WeightSequence {
    fn clone(&self) -> Self {
        WeightSequence {
            rule: self.rule.clone(),
            label: self.label.clone(),
            betas: Mutex::new(self.betas.lock().unwrap().clone()),
        }
    }
}

impl PartialEq for WeightSequence {
    fn eq(&self, other: &Self) -> bool {
        self.rule == other.rule
    }
}

impl WeightSequence {
    fn from_rule(rule: Rule) -> Self {
        let label = rule.label();
        WeightSequence { rule, label, betas: Mutex::new(vec![1.0]) }
    }

    /// Classical Hardy space: `w_k ≡ 1`.
    pub fn hardy() -> Self {
        Self::from_rule(Rule::Hardy)
    }

    /// Weighted Dirichlet space: `w_k = √((k + 2λ + 1)/(k + 1))`, `λ > 0`.
    pub fn dirichlet(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "dirichlet weight needs lambda > 0, got {lambda}"
            )));
        }
        Ok(Self::from_rule(Rule::Dirichlet { lambda }))
    }

    /// Binomial weight: `w_k = (k + N)/k`, so `β_k = C(N+k, k)`.
    pub fn dn1(n: u32) -> Self {
        Self::from_rule(Rule::Dn1 { n })
    }

    /// Power weight: `w_k = ((k + 1)/k)^N`, so `β_k = (k + 1)^N`.
    pub fn dn2(n: u32) -> Self {
        Self::from_rule(Rule::Dn2 { n })
    }

    /// Explicit head list `w_1, w_2, …` with tail rule `w_k = 1`.
    pub fn custom(head: Vec<f64>) -> Result<Self> {
        if head.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter(
                "custom weight list must contain positive finite entries".into(),
            ));
        }
        Ok(Self::from_rule(Rule::Custom { head }))
    }

    /// The inverse-weight space: same type with rule `k ↦ 1/w_k`.
    pub fn inverse(&self) -> Self {
        let rule = match &self.rule {
            Rule::Inverse(inner) => (**inner).clone(),
            other => Rule::Inverse(Box::new(other.clone())),
        };
        Self::from_rule(rule)
    }

    /// The lifted space with `β̃_n = (n + 1) β_n`, i.e. `w̃_k = w_k (k+1)/k`.
    pub fn tilde_lift(&self) -> Self {
        Self::from_rule(Rule::Tilde(Box::new(self.rule.clone())))
    }

    /// Preset label with parameters (used in report provenance and dumps).
    pub fn label(&self) -> &str {
        &self.label
    }

    /// The weight `w_k`, `k ≥ 1`.
    pub fn w(&self, k: usize) -> f64 {
        assert!(k >= 1, "weights are indexed from 1");
        self.rule.w(k)
    }

    /// The basis weights `β_0 … β_{n−1}`.
    pub fn betas(&self, n: usize) -> Vec<f64> {
        let mut cache = self.betas.lock().unwrap();
        while cache.len() < n {
            let k = cache.len();
            let next = cache[k - 1] * self.rule.w(k);
            cache.push(next);
        }
        cache[..n].to_vec()
    }

    /// A single `β_k`.
    pub fn beta(&self, k: usize) -> f64 {
        self.betas(k + 1)[k]
    }

    /// Exact `β_k²` where the preset has a rational closed form
    /// (hardy, integer-λ dirichlet, dn1, dn2, and their inverse/tilde wrappers).
    pub fn beta_sq_exact(&self, k: usize) -> Option<Rat> {
        if k == 0 {
            return Some(rat_int(1));
        }
        self.rule.beta_sq_exact(k)
    }

    /// Exact `w_k²` where available, via `β_k²/β_{k−1}²`.
    pub fn w_sq_exact(&self, k: usize) -> Option<Rat> {
        assert!(k >= 1);
        let num = self.rule.beta_sq_exact(k)?;
        let den = if k == 1 { rat_int(1) } else { self.rule.beta_sq_exact(k - 1)? };
        Some(num / den)
    }

    /// Growth order of the preset where known in closed form; `None` for
    /// custom rules. Bound formulas prefer this over the probe estimate.
    pub fn known_growth_order(&self) -> Option<u32> {
        self.rule.known_growth_order()
    }

    /// Probe `(k+1)|w_k − 1|` for `k ≤ probe_limit` and classify the growth.
    ///
    /// `PolynomialGrowth` is reported when the running sup over the full range
    /// exceeds the running sup over the first half by at most
    /// [`STABILIZATION_RTOL`] relatively; the two-sided order estimate
    /// `m_estimate = max(0, max_k (k+1)·max(w_k − 1, 1/w_k − 1))`
    /// is the smallest `M` making
    /// `(k+1)/(k+M+1) ≤ w_k ≤ (k+M+1)/(k+1)` hold at every probed `k`.
    pub fn classify_growth(&self, probe_limit: usize) -> Result<GrowthReport> {
        if probe_limit < 16 {
            return Err(Error::InvalidParameter(format!(
                "probe_limit must be at least 16, got {probe_limit}"
            )));
        }
        let half = probe_limit / 2;
        let mut sup = 0.0f64;
        let mut sup_at_half = 0.0f64;
        let mut m_req = 0.0f64;
        for k in 1..=probe_limit {
            let w = self.rule.w(k);
            let kf = (k + 1) as f64;
            sup = sup.max(kf * (w - 1.0).abs());
            // Upper side needs M ≥ (k+1)(w−1); lower side needs M ≥ (k+1)(1/w−1).
            m_req = m_req.max(kf * (w - 1.0)).max(kf * (1.0 / w - 1.0));
            if k == half {
                sup_at_half = sup;
            }
        }
        let stabilized = sup <= sup_at_half * (1.0 + STABILIZATION_RTOL) + f64::EPSILON;
        let classification = if stabilized {
            GrowthClass::PolynomialGrowth
        } else {
            GrowthClass::IntermediateGrowthSuspected
        };
        let m_estimate = if stabilized { Some(m_req.max(0.0)) } else { None };
        Ok(GrowthReport { sup_probe: sup, probe_limit, classification, m_estimate })
    }
}

/// Kinds of diagonal operator sections derived from a weight sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagonalKind {
    /// `diag(β_0, …, β_{N−1})`.
    Beta,
    /// `diag(1/β_0, …, 1/β_{N−1})`.
    BetaInv,
    /// `diag(w_1, …, w_N)`: entry `k` is `w_{k+1}`.
    W,
    /// `diag((k+2)/(k+1))`: the shift factor relating `β̃` to `β`.
    Shift,
    /// `diag(w̃_1, …, w̃_N)` with `w̃_{k+1} = w_{k+1}(k+2)/(k+1)`: the
    /// entrywise product of [`DiagonalKind::Shift`] and [`DiagonalKind::W`].
    WTilde,
}

/// Entries of the requested diagonal section.
pub fn diagonal_entries(kind: DiagonalKind, w: &WeightSequence, n: usize) -> Vec<f64> {
    match kind {
        DiagonalKind::Beta => w.betas(n),
        DiagonalKind::BetaInv => w.betas(n).into_iter().map(|b| 1.0 / b).collect(),
        DiagonalKind::W => (0..n).map(|k| w.w(k + 1)).collect(),
        DiagonalKind::Shift => (0..n).map(|k| (k as f64 + 2.0) / (k as f64 + 1.0)).collect(),
        DiagonalKind::WTilde => (0..n)
            // Same multiplication order as Shift·W so the product identity
            // holds exactly in floating point.
            .map(|k| (k as f64 + 2.0) / (k as f64 + 1.0) * w.w(k + 1))
            .collect(),
    }
}
