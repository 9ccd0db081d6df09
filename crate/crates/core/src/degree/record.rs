use std::fmt;

use serde::{Deserialize, Serialize};

/// How a degree value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Probe,
    Picard,
    Symbolic,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Probe => "probe",
            Method::Picard => "picard",
            Method::Symbolic => "symbolic",
        })
    }
}

/// One measured or predicted value of `deg(K^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub q: usize,
    pub n: usize,
    pub degree: u128,
    pub method: Method,
    /// Seeds of the runs that agreed on `degree` (probe only).
    pub seeds: Vec<u64>,
    /// Primes of the runs that agreed on `degree` (probe only).
    pub primes: Vec<u64>,
    /// Number of independent runs that produced `degree`.
    pub agreement: usize,
}

impl DegreeRecord {
    pub fn exact(q: usize, n: usize, degree: u128, method: Method) -> Self {
        DegreeRecord {
            q,
            n,
            degree,
            method,
            seeds: Vec::new(),
            primes: Vec::new(),
            agreement: 1,
        }
    }

    /// Checks the structural invariants: `1 <= degree <= (q^2-q+1)^n` for `n >= 1`,
    /// degree 1 at `n = 0`, and at least two agreeing runs for probe records.
    pub fn is_consistent(&self) -> bool {
        let base = (self.q * self.q - self.q + 1) as u128;
        let bound = base.checked_pow(self.n as u32);
        let in_range = if self.n == 0 {
            self.degree == 1
        } else {
            self.degree >= 1 && bound.map_or(true, |b| self.degree <= b)
        };
        in_range && (self.method != Method::Probe || self.agreement >= 2)
    }
}
