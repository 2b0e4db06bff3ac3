//! Wheeler DFA domain types and the Wheeler-property validator.
//!
//! States are `1..=n`, labels are `1..=sigma`, and the Wheeler order is the
//! integer order on states. Final states are not modelled.

use std::fmt;

use thiserror::Error;

/// Family parameters: `n` states, `m` transitions, alphabet `1..=sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    pub n: u64,
    pub m: u64,
    pub sigma: u64,
}

/// The inequality that makes a parameter triple describe an empty family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// `n >= 2`
    MinStates,
    /// `sigma >= 1`
    MinAlphabet,
    /// `m >= n - 1`
    MinTransitions,
    /// `m <= n * sigma`
    MaxTransitions,
    /// `sigma <= n - 1`
    MaxAlphabet,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constraint::MinStates => "n >= 2",
            Constraint::MinAlphabet => "sigma >= 1",
            Constraint::MinTransitions => "m >= n - 1",
            Constraint::MaxTransitions => "m <= n * sigma",
            Constraint::MaxAlphabet => "sigma <= n - 1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("empty family for n={n} m={m} sigma={sigma}: violates {constraint}", n = .params.n, m = .params.m, sigma = .params.sigma)]
    EmptyFamily { params: Params, constraint: Constraint },
}

impl Params {
    pub const fn new(n: u64, m: u64, sigma: u64) -> Self {
        Params { n, m, sigma }
    }

    /// Checks the constraints in a fixed order and reports the first one violated.
    pub fn validate(&self) -> Result<(), ParamError> {
        let Params { n, m, sigma } = *self;
        let violated = if n < 2 {
            Some(Constraint::MinStates)
        } else if sigma < 1 {
            Some(Constraint::MinAlphabet)
        } else if m < n - 1 {
            Some(Constraint::MinTransitions)
        } else if n.checked_mul(sigma).is_some_and(|cells| m > cells) {
            Some(Constraint::MaxTransitions)
        } else if sigma > n - 1 {
            Some(Constraint::MaxAlphabet)
        } else {
            None
        };
        match violated {
            Some(constraint) => Err(ParamError::EmptyFamily { params: *self, constraint }),
            None => Ok(()),
        }
    }

    /// Number of cells of the out-matrix, `n * sigma`.
    pub fn cells(&self) -> u64 {
        self.n * self.sigma
    }

    /// True when some draw of the out-matrix can leave a column empty, i.e.
    /// when the sampler may need to restart.
    pub fn may_reject(&self) -> bool {
        self.m <= self.n * (self.sigma - 1)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} m={} sigma={}", self.n, self.m, self.sigma)
    }
}

/// Validates `p`; free-function form of [`Params::validate`].
pub fn validate_params(p: Params) -> Result<(), ParamError> {
    p.validate()
}

/// One labelled edge `source --label--> dest`.
///
/// The derived ordering is `(label, source, dest)`, which is the canonical
/// transition order and the emission order of the streaming sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub label: u64,
    pub source: u64,
    pub dest: u64,
}

impl Transition {
    pub const fn new(source: u64, label: u64, dest: u64) -> Self {
        Transition { label, source, dest }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({},{}),{})", self.source, self.label, self.dest)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("automaton needs at least one state and one label (n={n}, sigma={sigma})")]
    Degenerate { n: u64, sigma: u64 },
    #[error("transition {transition} out of range for n={n} sigma={sigma}")]
    OutOfRange { transition: Transition, n: u64, sigma: u64 },
}

/// A candidate automaton: well-ranged transitions in canonical order, not
/// yet known to be Wheeler.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automaton {
    n: u64,
    sigma: u64,
    transitions: Vec<Transition>,
}

impl Automaton {
    pub fn new(
        n: u64,
        sigma: u64,
        mut transitions: Vec<Transition>,
    ) -> Result<Self, AutomatonError> {
        if n == 0 || sigma == 0 {
            return Err(AutomatonError::Degenerate { n, sigma });
        }
        if let Some(&transition) = transitions.iter().find(|t| {
            !(1..=n).contains(&t.source) || !(1..=n).contains(&t.dest) || !(1..=sigma).contains(&t.label)
        }) {
            return Err(AutomatonError::OutOfRange { transition, n, sigma });
        }
        transitions.sort_unstable();
        Ok(Automaton { n, sigma, transitions })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn sigma(&self) -> u64 {
        self.sigma
    }

    pub fn m(&self) -> u64 {
        self.transitions.len() as u64
    }

    /// Transitions in ascending `(label, source, dest)` order.
    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn params(&self) -> Params {
        Params::new(self.n, self.m(), self.sigma)
    }

    pub fn into_wheeler(self) -> Result<WheelerDfa, Violation> {
        check_wheeler(&self)?;
        Ok(WheelerDfa(self))
    }
}

/// An automaton known to satisfy every Wheeler invariant under the order
/// `1 < 2 < ... < n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WheelerDfa(Automaton);

impl WheelerDfa {
    /// Wraps an automaton whose validity is guaranteed by construction.
    pub(crate) fn from_trusted(automaton: Automaton) -> Self {
        debug_assert_eq!(check_wheeler(&automaton), Ok(()));
        WheelerDfa(automaton)
    }

    pub fn into_inner(self) -> Automaton {
        self.0
    }

    /// Canonical identity: the sorted transition list flattened to integers.
    pub fn key(&self) -> Vec<u64> {
        self.transitions()
            .iter()
            .flat_map(|t| [t.source, t.label, t.dest])
            .collect()
    }
}

impl std::ops::Deref for WheelerDfa {
    type Target = Automaton;

    fn deref(&self) -> &Automaton {
        &self.0
    }
}

impl TryFrom<Automaton> for WheelerDfa {
    type Error = Violation;

    fn try_from(a: Automaton) -> Result<Self, Violation> {
        a.into_wheeler()
    }
}

/// The first Wheeler invariant a candidate violates, with a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("determinism: state {} has two transitions labelled {}: {first} and {second}", .first.source, .first.label)]
    Nondeterministic { first: Transition, second: Transition },
    #[error("in-degree: source state 1 has an in-transition {transition}")]
    SourceHasInTransition { transition: Transition },
    #[error("in-degree: state {state} has no in-transition")]
    MissingInTransition { state: u64 },
    #[error("input consistency: state {state} receives labels {} and {} ({first}, {second})", .first.label, .second.label)]
    InputInconsistent { state: u64, first: Transition, second: Transition },
    #[error("axiom i: labels {} < {} but dests {} >= {} ({first}, {second})", .first.label, .second.label, .first.dest, .second.dest)]
    LabelOrder { first: Transition, second: Transition },
    #[error("axiom ii: sources {} < {} but dests {} > {} ({first}, {second})", .first.source, .second.source, .first.dest, .second.dest)]
    ForwardOrder { first: Transition, second: Transition },
    #[error("effective alphabet: label {label} labels no transition")]
    UnusedLabel { label: u64 },
}

/// Checks every Wheeler invariant of `d` under the order `1 < ... < n`.
///
/// Checks run in the order determinism, in-degree, input consistency,
/// axiom (i), axiom (ii), effective alphabet; the first failure is returned.
/// `O(m log m)` for the canonical sort plus `O(n)` for per-state tallies.
pub fn check_wheeler(d: &Automaton) -> Result<(), Violation> {
    let ts = d.transitions();

    for pair in ts.windows(2) {
        if (pair[0].label, pair[0].source) == (pair[1].label, pair[1].source) {
            return Err(Violation::Nondeterministic { first: pair[0], second: pair[1] });
        }
    }

    // First in-transition seen per state, in canonical order.
    let mut first_in: Vec<Option<Transition>> = vec![None; d.n() as usize + 1];
    for t in ts {
        if t.dest == 1 {
            return Err(Violation::SourceHasInTransition { transition: *t });
        }
        first_in[t.dest as usize].get_or_insert(*t);
    }
    if let Some(state) = (2..=d.n()).find(|&v| first_in[v as usize].is_none()) {
        return Err(Violation::MissingInTransition { state });
    }

    for t in ts {
        let first = first_in[t.dest as usize].expect("tallied above");
        if first.label != t.label {
            return Err(Violation::InputInconsistent { state: t.dest, first, second: *t });
        }
    }

    // Label blocks, each sorted by source.
    let blocks: Vec<&[Transition]> = ts.chunk_by(|a, b| a.label == b.label).collect();

    for pair in blocks.windows(2) {
        let max = pair[0].iter().max_by_key(|t| t.dest).expect("non-empty block");
        let min = pair[1].iter().min_by_key(|t| t.dest).expect("non-empty block");
        if max.dest >= min.dest {
            return Err(Violation::LabelOrder { first: *max, second: *min });
        }
    }

    for block in &blocks {
        for pair in block.windows(2) {
            if pair[0].dest > pair[1].dest {
                return Err(Violation::ForwardOrder { first: pair[0], second: pair[1] });
            }
        }
    }

    let mut used = 0u64;
    for (label, block) in (1..).zip(&blocks) {
        if block[0].label != label {
            return Err(Violation::UnusedLabel { label });
        }
        used = label;
    }
    if used < d.sigma() {
        return Err(Violation::UnusedLabel { label: used + 1 });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn five_state() -> Vec<Transition> {
        vec![
            Transition::new(1, 2, 3),
            Transition::new(2, 1, 2),
            Transition::new(3, 2, 4),
            Transition::new(4, 2, 4),
            Transition::new(5, 1, 2),
            Transition::new(5, 2, 5),
        ]
    }

    #[test]
    fn params_examples() {
        assert_eq!(validate_params(Params::new(5, 6, 2)), Ok(()));
        assert_eq!(validate_params(Params::new(2, 1, 1)), Ok(()));
        let err = validate_params(Params::new(3, 2, 3)).unwrap_err();
        let ParamError::EmptyFamily { constraint, .. } = err;
        assert_eq!(constraint, Constraint::MaxAlphabet);
    }

    #[test]
    fn params_first_violation() {
        let first = |n, m, s| match Params::new(n, m, s).validate() {
            Err(ParamError::EmptyFamily { constraint, .. }) => Some(constraint),
            Ok(()) => None,
        };
        assert_eq!(first(1, 0, 0), Some(Constraint::MinStates));
        assert_eq!(first(4, 3, 0), Some(Constraint::MinAlphabet));
        assert_eq!(first(5, 3, 2), Some(Constraint::MinTransitions));
        assert_eq!(first(5, 11, 2), Some(Constraint::MaxTransitions));
        assert_eq!(first(3, 3, 3), Some(Constraint::MaxAlphabet));
        assert_eq!(first(u64::MAX, u64::MAX, u64::MAX), Some(Constraint::MaxAlphabet));
    }

    #[test]
    fn may_reject() {
        assert!(!Params::new(4, 8, 2).may_reject());
        assert!(!Params::new(4, 5, 2).may_reject());
        assert!(Params::new(4, 4, 2).may_reject());
        assert!(!Params::new(7, 6, 1).may_reject());
    }

    #[test]
    fn five_state_is_wheeler() {
        let a = Automaton::new(5, 2, five_state()).unwrap();
        assert_eq!(check_wheeler(&a), Ok(()));
        assert_eq!(a.transitions()[0], Transition::new(2, 1, 2));
    }

    #[test]
    fn extra_edge_breaks_input_consistency() {
        let mut ts = five_state();
        ts.push(Transition::new(1, 1, 3));
        let a = Automaton::new(5, 2, ts).unwrap();
        let err = check_wheeler(&a).unwrap_err();
        assert!(matches!(err, Violation::InputInconsistent { state: 3, .. }), "{err}");
        assert!(err.to_string().starts_with("input consistency: state 3 receives labels 1 and 2"));
    }

    #[test]
    fn forward_order_violation() {
        let a = Automaton::new(3, 1, vec![Transition::new(1, 1, 3), Transition::new(2, 1, 2)]).unwrap();
        assert_eq!(
            check_wheeler(&a),
            Err(Violation::ForwardOrder {
                first: Transition::new(1, 1, 3),
                second: Transition::new(2, 1, 2)
            })
        );
    }

    #[test]
    fn scan_order() {
        let nondet = Automaton::new(
            3,
            1,
            vec![Transition::new(1, 1, 2), Transition::new(1, 1, 3), Transition::new(2, 1, 1)],
        )
        .unwrap();
        assert!(matches!(check_wheeler(&nondet), Err(Violation::Nondeterministic { .. })));

        let into_source = Automaton::new(2, 1, vec![Transition::new(2, 1, 1)]).unwrap();
        assert!(matches!(check_wheeler(&into_source), Err(Violation::SourceHasInTransition { .. })));

        let orphan = Automaton::new(3, 1, vec![Transition::new(1, 1, 2)]).unwrap();
        assert_eq!(check_wheeler(&orphan), Err(Violation::MissingInTransition { state: 3 }));

        let labels = Automaton::new(3, 2, vec![Transition::new(1, 2, 2), Transition::new(1, 1, 3)]).unwrap();
        assert!(matches!(check_wheeler(&labels), Err(Violation::LabelOrder { .. })));

        let unused = Automaton::new(3, 3, vec![Transition::new(1, 1, 2), Transition::new(1, 3, 3)]).unwrap();
        assert_eq!(check_wheeler(&unused), Err(Violation::UnusedLabel { label: 2 }));

        let tail = Automaton::new(3, 3, vec![Transition::new(1, 1, 2), Transition::new(1, 2, 3)]).unwrap();
        assert_eq!(check_wheeler(&tail), Err(Violation::UnusedLabel { label: 3 }));
    }

    #[test]
    fn equal_dests_allowed_within_label() {
        let a = Automaton::new(2, 1, vec![Transition::new(1, 1, 2), Transition::new(2, 1, 2)]).unwrap();
        assert_eq!(check_wheeler(&a), Ok(()));
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(
            Automaton::new(2, 1, vec![Transition::new(3, 1, 2)]),
            Err(AutomatonError::OutOfRange { .. })
        ));
        assert!(matches!(
            Automaton::new(2, 1, vec![Transition::new(1, 2, 2)]),
            Err(AutomatonError::OutOfRange { .. })
        ));
    }
}
