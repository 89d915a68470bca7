use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gint::ExactScalar;

use super::{relative_error, ExactState, FloatState};

/// Per-component tolerance used when merging float terms equal up to global phase.
pub const MERGE_TOL: f64 = 1e-9;

/// Float coefficients whose magnitude drops below this after merging are removed.
const ZERO_COEFF: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Coeff {
    Exact(ExactScalar),
    Float(Complex64),
}

impl Coeff {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Coeff::Exact(x) => x.to_complex(),
            Coeff::Float(z) => *z,
        }
    }

    pub fn scale_float(&self, c: Complex64) -> Coeff {
        Coeff::Float(self.to_complex() * c)
    }

    fn is_negligible(&self) -> bool {
        match self {
            Coeff::Exact(x) => x.is_zero(),
            Coeff::Float(z) => z.norm() < ZERO_COEFF,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TermState {
    Exact(ExactState),
    Float(FloatState),
}

impl TermState {
    pub fn n(&self) -> usize {
        match self {
            TermState::Exact(s) => s.n(),
            TermState::Float(s) => s.n(),
        }
    }

    pub fn to_float(&self) -> FloatState {
        match self {
            TermState::Exact(s) => s.to_float(),
            TermState::Float(s) => s.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&ExactState> {
        match self {
            TermState::Exact(s) => Some(s),
            TermState::Float(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: Coeff,
    pub state: TermState,
}

impl Term {
    pub fn exact(coeff: ExactScalar, state: ExactState) -> Self {
        Term {
            coeff: Coeff::Exact(coeff),
            state: TermState::Exact(state),
        }
    }

    pub fn float(coeff: Complex64, state: FloatState) -> Self {
        Term {
            coeff: Coeff::Float(coeff),
            state: TermState::Float(state),
        }
    }
}

/// What a decomposition approximates.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    /// `|H⟩^⊗n`.
    HTensor,
    State(FloatState),
}

impl Target {
    pub fn to_float(&self, n: usize) -> FloatState {
        match self {
            Target::HTensor => FloatState::h_tensor(n),
            Target::State(s) => s.clone(),
        }
    }
}

/// A weighted sum of stabilizer-state terms `Σ c_j |s_j⟩` with a declared target.
///
/// Terms equal up to global phase are merged on construction, so `rank()` counts
/// distinct states.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    n: usize,
    terms: Vec<Term>,
    target: Target,
}

impl Decomposition {
    pub fn new(n: usize, terms: Vec<Term>, target: Target) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput(
                "decomposition needs at least one term".into(),
            ));
        }
        if let Target::State(t) = &target {
            if t.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: 1 << n,
                    found: t.len(),
                });
            }
        }
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for term in terms {
            if term.state.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: 1 << n,
                    found: 1 << term.state.n(),
                });
            }
            push_merged(&mut merged, term);
        }
        merged.retain(|t| !t.coeff.is_negligible());
        if merged.is_empty() {
            return Err(Error::InvalidInput("all terms cancelled".into()));
        }
        Ok(Decomposition {
            n,
            terms: merged,
            target,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    /// `Σ c_j |s_j⟩` in double precision.
    pub fn assemble_float(&self) -> FloatState {
        let mut acc = FloatState::zero(self.n);
        for t in &self.terms {
            match &t.state {
                TermState::Float(s) => acc.add_scaled(t.coeff.to_complex(), s),
                TermState::Exact(s) => acc.add_scaled(t.coeff.to_complex(), &s.to_float()),
            }
            .expect("term dimensions checked on construction");
        }
        acc
    }

    /// `Σ c_j |s_j⟩` exactly, when every coefficient and state is exact.
    pub fn assemble_exact(&self) -> Option<ExactState> {
        let mut acc = ExactState::zero(self.n);
        for t in &self.terms {
            let (Coeff::Exact(c), TermState::Exact(s)) = (&t.coeff, &t.state) else {
                return None;
            };
            acc = acc.add(&s.scale(c)).ok()?;
        }
        Some(acc)
    }

    /// Relative error of the assembled state against the target.
    pub fn relative_error(&self) -> Result<f64> {
        relative_error(&self.assemble_float(), &self.target.to_float(self.n))
    }

    /// Converts every term to double precision.
    pub fn to_float(&self) -> Decomposition {
        Decomposition {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| Term::float(t.coeff.to_complex(), t.state.to_float()))
                .collect(),
            target: self.target.clone(),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scaled(&self, c: Complex64) -> Decomposition {
        Decomposition {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.scale_float(c),
                    state: t.state.clone(),
                })
                .collect(),
            target: self.target.clone(),
        }
    }

    /// Term-wise tensor product; the target becomes `|H⟩^⊗(n+m)` when both are `H`.
    pub fn tensor(&self, other: &Decomposition) -> Result<Decomposition> {
        let target = match (&self.target, &other.target) {
            (Target::HTensor, Target::HTensor) => Target::HTensor,
            (a, b) => Target::State(a.to_float(self.n).tensor(&b.to_float(other.n))),
        };
        let mut terms = Vec::with_capacity(self.rank() * other.rank());
        for a in &self.terms {
            for b in &other.terms {
                let coeff = match (&a.coeff, &b.coeff) {
                    (Coeff::Exact(x), Coeff::Exact(y)) => Coeff::Exact(x * y),
                    (x, y) => Coeff::Float(x.to_complex() * y.to_complex()),
                };
                let state = match (&a.state, &b.state) {
                    (TermState::Exact(x), TermState::Exact(y)) => TermState::Exact(x.tensor(y)),
                    (x, y) => TermState::Float(x.to_float().tensor(&y.to_float())),
                };
                terms.push(Term { coeff, state });
            }
        }
        Decomposition::new(self.n + other.n, terms, target)
    }
}

fn push_merged(merged: &mut Vec<Term>, term: Term) {
    for existing in merged.iter_mut() {
        if let Some(coeff) = merged_coeff(existing, &term) {
            existing.coeff = coeff;
            return;
        }
    }
    merged.push(term);
}

/// If `incoming.state = λ·existing.state`, the coefficient of `existing.state` after
/// absorbing `incoming`.
fn merged_coeff(existing: &Term, incoming: &Term) -> Option<Coeff> {
    match (&existing.state, &incoming.state) {
        (TermState::Exact(a), TermState::Exact(b)) => {
            let lambda = a.proportionality(b)?;
            Some(match (&existing.coeff, &incoming.coeff) {
                (Coeff::Exact(x), Coeff::Exact(y)) => Coeff::Exact(x + &(y * &lambda)),
                (x, y) => Coeff::Float(x.to_complex() + y.to_complex() * lambda.to_complex()),
            })
        }
        (TermState::Float(fa), TermState::Float(fb)) => float_merge(existing, incoming, fa, fb),
        (a, b) => float_merge(existing, incoming, &a.to_float(), &b.to_float()),
    }
}

fn float_merge(
    existing: &Term,
    incoming: &Term,
    fa: &FloatState,
    fb: &FloatState,
) -> Option<Coeff> {
    let lambda = fa.phase_relative_to(fb, MERGE_TOL)?;
    Some(Coeff::Float(
        existing.coeff.to_complex() + incoming.coeff.to_complex() * lambda,
    ))
}
