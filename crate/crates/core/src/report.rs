//! Check reports: the verdict record shared by every check and sweep, with
//! its JSON form (schema 1) and a terminal renderer.

use std::fmt;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn from_holds(holds: bool) -> Self {
        if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
        })
    }
}

/// Evidence attached to a verdict. Ideals and elements are stored as
/// literals in the command-line grammar so every witness can be re-run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `B = I:H`, `A = I:B` and the product `A*B` compared against `I`.
    Criterion {
        i: String,
        h: String,
        a: String,
        b: String,
        product: String,
    },
    /// `I = A'*B'` with `A ⊆ A'` and `B ⊆ B'`.
    Factorization {
        a: String,
        b: String,
        provenance: String,
    },
    /// No factorization exists for the triple.
    NoFactorization { i: String, a: String, b: String },
    /// A v-closure that is not invertible.
    NonInvertible {
        ideal: String,
        v_closure: String,
        product_with_inverse: String,
    },
    /// Elements with `xD ∩ yD = xyD` but `xD + yD ≠ D`.
    NotComaximal {
        x: String,
        y: String,
        sum: String,
    },
    /// Two sides of an identity that should agree.
    Identity {
        name: String,
        lhs: String,
        rhs: String,
    },
    /// Order of vanishing mismatch at a prime.
    Vanishing {
        prime: String,
        colon_order: u32,
        expected: u32,
    },
    /// Engine and oracle disagree on a domain or a single instance.
    Disagreement {
        instance: Vec<String>,
        engine: Verdict,
        oracle: Verdict,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub inputs: Vec<String>,
    pub witness: Witness,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub pairs_checked: u64,
    pub failures: Vec<Failure>,
    pub runtime_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe_size: Option<usize>,
}

/// What the theory predicts for the domain, kept apart from what the
/// bounded check observed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub sharp: bool,
    pub basis: String,
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sharp { "sharp" } else { "not sharp" };
        write!(f, "predicted {s} ({})", self.basis)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema: u32,
    pub domain: String,
    pub check: String,
    pub inputs: Vec<String>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Enumeration bound of a sweep; `None` for single-instance checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prediction: Option<Prediction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub stats: Stats,
}

impl CheckReport {
    pub fn new(domain: impl Into<String>, check: impl Into<String>, inputs: Vec<String>) -> Self {
        CheckReport {
            schema: SCHEMA_VERSION,
            domain: domain.into(),
            check: check.into(),
            inputs,
            verdict: Verdict::Holds,
            witness: None,
            budget: None,
            prediction: None,
            note: None,
            stats: Stats::default(),
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }

    /// Verdict phrase scoped to the budget, e.g. `holds on budget 50`.
    pub fn scoped_verdict(&self) -> String {
        match self.budget {
            Some(b) => format!("{} on budget {b}", self.verdict),
            None => self.verdict.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Multi-line text rendering for terminals.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("check:      {}\n", self.check));
        out.push_str(&format!("domain:     {}\n", self.domain));
        if !self.inputs.is_empty() {
            out.push_str(&format!("inputs:     {}\n", self.inputs.join("  ")));
        }
        out.push_str(&format!("verdict:    {}\n", self.scoped_verdict()));
        if let Some(p) = &self.prediction {
            out.push_str(&format!("prediction: {p} [theory, not verified by this run]\n"));
        }
        if let Some(n) = &self.note {
            out.push_str(&format!("note:       {n}\n"));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!("witness:    {}\n", render_witness(w)));
        }
        let mut stats = format!("{} checked", self.stats.pairs_checked);
        if let Some(u) = self.stats.universe_size {
            stats.push_str(&format!(", universe {u}"));
        }
        stats.push_str(&format!(
            ", {} failures, {} ms",
            self.stats.failures.len(),
            self.stats.runtime_ms
        ));
        out.push_str(&format!("stats:      {stats}\n"));
        out
    }
}

pub fn render_witness(w: &Witness) -> String {
    match w {
        Witness::Criterion { i, h, a, b, product } => format!(
            "I = {i}, H = {h}: A = I:(I:H) = {a}, B = I:H = {b}, A*B = {product}"
        ),
        Witness::Factorization { a, b, provenance } => {
            format!("A' = {a}, B' = {b} ({provenance})")
        }
        Witness::NoFactorization { i, a, b } => {
            format!("no A' ⊇ {a}, B' ⊇ {b} with A'*B' = {i}")
        }
        Witness::NonInvertible {
            ideal,
            v_closure,
            product_with_inverse,
        } => format!(
            "{ideal} has v-closure {v_closure}, and v-closure times its inverse is {product_with_inverse}"
        ),
        Witness::NotComaximal { x, y, sum } => {
            format!("x = {x}, y = {y} are v-coprime but xD + yD = {sum}")
        }
        Witness::Identity { name, lhs, rhs } => format!("{name}: {lhs} vs {rhs}"),
        Witness::Vanishing {
            prime,
            colon_order,
            expected,
        } => format!("at {prime}: ord(A:B) = {colon_order}, expected {expected}"),
        Witness::Disagreement {
            instance,
            engine,
            oracle,
        } => format!(
            "engine {engine}, oracle {oracle} on {}",
            instance.join(", ")
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_schema() {
        let mut r = CheckReport::new("quad:d=-3", "sharp_pair_check", vec!["ideal(2, 2w)".into()]);
        r.verdict = Verdict::Fails;
        r.witness = Some(Witness::Identity {
            name: "x".into(),
            lhs: "a".into(),
            rhs: "b".into(),
        });
        r.budget = Some(10);
        let json = r.to_json();
        assert!(json.contains("\"schema\": 1"));
        assert_eq!(CheckReport::from_json(&json).unwrap(), r);
        assert!(r.render_text().contains("fails on budget 10"));
    }
}
