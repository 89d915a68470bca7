use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gint::{ExactScalar, Unit};
use crate::statevec::ExactState;

use super::gates::{apply_gate, Gate};

/// Largest `n` enumerated without the opt-in flag.
pub const MAX_DEFAULT_QUBITS: usize = 3;

/// The BFS generators `{S_q, E_q, CX_{q→q'}}`.
pub fn generators(n: usize) -> Vec<Gate> {
    let mut gens = Vec::new();
    for q in 0..n {
        gens.push(Gate::S(q));
        gens.push(Gate::E(q));
    }
    for control in 0..n {
        for target in (0..n).filter(|&t| t != control) {
            gens.push(Gate::Cx { control, target });
        }
    }
    gens
}

/// Rotates `v` by the unit that puts its first nonzero amplitude in the first quadrant
/// (`re > 0`, `im ≥ 0`). Amplitudes outside `Q(i)` are left as they are.
pub fn canonical_phase(v: &ExactState) -> ExactState {
    let Some(j) = v.first_nonzero() else {
        return v.clone();
    };
    let Some((re, im)) = v.amplitudes()[j].gaussian_parts() else {
        return v.clone();
    };
    let (re, im) = (re.clone(), im.clone());
    let zero = num_rational::BigRational::from_integer(0.into());
    // multiply by i^{-k} where a = i^k · (first-quadrant)
    let k: i64 = if re > zero && im >= zero {
        0
    } else if re <= zero && im > zero {
        1
    } else if re < zero && im <= zero {
        2
    } else {
        3
    };
    if k == 0 {
        return v.clone();
    }
    v.scale(&ExactScalar::one().mul_zeta_pow(4 * Unit::from_power(k).inverse().power() as i64))
}

/// All `n`-qubit stabilizer states up to units, in canonical phase, sorted by amplitudes.
#[derive(Clone, Debug)]
pub struct StabilizerSet {
    n: usize,
    states: Vec<ExactState>,
    index: HashMap<ExactState, usize>,
}

impl StabilizerSet {
    fn from_states(n: usize, mut states: Vec<ExactState>) -> Self {
        states.sort_by(|a, b| a.amplitudes().cmp(b.amplitudes()));
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        StabilizerSet { n, states, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[ExactState] {
        &self.states
    }

    pub fn get(&self, i: usize) -> Option<&ExactState> {
        self.states.get(i)
    }

    /// Index of `v` if it equals a member up to a unit `{±1, ±i}`.
    pub fn index_of(&self, v: &ExactState) -> Option<usize> {
        self.index.get(&canonical_phase(v)).copied()
    }

    /// Index of the member proportional to `v`, for any nonzero scalar multiple.
    pub fn index_of_proportional(&self, v: &ExactState) -> Option<usize> {
        let j = v.first_nonzero()?;
        self.states
            .iter()
            .position(|s| s.first_nonzero() == Some(j) && s.proportionality(v).is_some())
    }
}

/// BFS enumeration for `1 ≤ n ≤ 3`.
pub fn enumerate_stabilizers(n: usize) -> Result<StabilizerSet> {
    if !(1..=MAX_DEFAULT_QUBITS).contains(&n) {
        return Err(Error::UnsupportedQubitCount {
            n,
            reason: "stabilizer enumeration supports 1 to 3 qubits (4 with the opt-in flag)",
        });
    }
    enumerate_stabilizers_with(n, &generators(n))
}

/// BFS closure of `|0^n⟩` under the given gates. Frontier expansion runs in parallel;
/// the result is sorted so it does not depend on scheduling or generator order.
pub fn enumerate_stabilizers_with(n: usize, gens: &[Gate]) -> Result<StabilizerSet> {
    if n == 0 || n > 4 {
        return Err(Error::UnsupportedQubitCount {
            n,
            reason: "stabilizer enumeration supports 1 to 4 qubits",
        });
    }
    let start = ExactState::basis(n, 0);
    let mut seen: HashSet<ExactState> = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let next: Vec<ExactState> = frontier
            .par_iter()
            .flat_map_iter(|s| {
                gens.iter()
                    .map(move |g| apply_gate(s, g).map(|w| canonical_phase(&w)))
            })
            .collect::<Result<_>>()?;
        frontier = next
            .into_iter()
            .filter(|s| seen.insert(s.clone()))
            .collect();
    }
    Ok(StabilizerSet::from_states(n, seen.into_iter().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(enumerate_stabilizers(1).unwrap().len(), 6);
        assert_eq!(enumerate_stabilizers(2).unwrap().len(), 60);
        assert!(enumerate_stabilizers(0).is_err());
        assert!(enumerate_stabilizers(4).is_err());
    }

    #[test]
    fn count_formula() {
        // 2^n · prod_{k=1..n} (2^k + 1)
        let formula = |n: u32| 2u64.pow(n) * (1..=n).map(|k| 2u64.pow(k) + 1).product::<u64>();
        assert_eq!(
            [formula(1), formula(2), formula(3), formula(4)],
            [6, 60, 1080, 36720]
        );
    }

    #[test]
    fn one_qubit_members() {
        let set = enumerate_stabilizers(1).unwrap();
        assert!(set.index_of(&ExactState::basis(1, 0)).is_some());
        assert!(set
            .index_of(&ExactState::basis(1, 1).scale(&ExactScalar::i()))
            .is_some());
        let h = super::super::gates::inv_one_plus_i();
        for phase in 0..4 {
            let v = ExactState::new(1, vec![h.clone(), h.mul_zeta_pow(4 * phase)]).unwrap();
            assert!(set.index_of(&v).is_some(), "phase {phase}");
        }
        let bad = ExactState::from_int_pairs(1, &[(1, 0), (2, 0)]).unwrap();
        assert!(set.index_of(&bad).is_none());
        assert!(set
            .index_of_proportional(&ExactState::from_int_pairs(1, &[(3, 3), (3, 3)]).unwrap())
            .is_some());
    }

    #[test]
    fn generator_order_independent() {
        let gens = generators(2);
        let mut rev = gens.clone();
        rev.reverse();
        let a = enumerate_stabilizers_with(2, &gens).unwrap();
        let b = enumerate_stabilizers_with(2, &rev).unwrap();
        assert_eq!(a.states(), b.states());
    }

    #[test]
    fn canonical_phase_examples() {
        let v = ExactState::from_int_pairs(1, &[(0, -2), (1, 0)]).unwrap();
        let c = canonical_phase(&v);
        assert_eq!(c, ExactState::from_int_pairs(1, &[(2, 0), (0, 1)]).unwrap());
        assert_eq!(canonical_phase(&c), c);
    }
}
