//! Quanta of information about decision-maker preferences and the
//! recombined criterion vectors they induce.
//!
//! A quantum says that criterion group `A` is more important than group `B`
//! with trade-off weights `w`: the DM accepts losing `w_j` units of each
//! `j ∈ B` in exchange for gaining `w_i` units of each `i ∈ A`. For the CES
//! problem there are two such quanta:
//!
//! * the first: costs `{f1, f2}` matter more than revenue `{f3}`,
//! * the second: revenue `{f3}` matters more than costs `{f1, f2}`.
//!
//! Criterion indices are 1-based, matching `f1`, `f2`, `f3`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ces::{CriteriaVector, EconomicProblem, ResourceBundle};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantum<T> {
    important: Vec<usize>,
    less_important: Vec<usize>,
    weights: BTreeMap<usize, T>,
    confidence: Option<T>,
}

impl<T: Scalar> Quantum<T> {
    pub fn new(
        important: impl IntoIterator<Item = usize>,
        less_important: impl IntoIterator<Item = usize>,
        weights: impl IntoIterator<Item = (usize, T)>,
        confidence: Option<T>,
    ) -> Result<Self> {
        let mut important: Vec<usize> = important.into_iter().collect();
        let mut less_important: Vec<usize> = less_important.into_iter().collect();
        important.sort_unstable();
        important.dedup();
        less_important.sort_unstable();
        less_important.dedup();
        let weights: BTreeMap<usize, T> = weights.into_iter().collect();

        if important.is_empty() || less_important.is_empty() {
            return Err(Error::InvalidQuantum("both groups must be nonempty".into()));
        }
        if important.contains(&0) || less_important.contains(&0) {
            return Err(Error::InvalidQuantum("criterion indices start at 1".into()));
        }
        if important.iter().any(|i| less_important.contains(i)) {
            return Err(Error::InvalidQuantum("groups must be disjoint".into()));
        }
        for i in important.iter().chain(&less_important) {
            match weights.get(i) {
                Some(w) if *w > T::zero() && w.is_finite() => {}
                Some(_) => {
                    return Err(Error::InvalidQuantum(format!(
                        "weight w{i} must be positive"
                    )))
                }
                None => return Err(Error::InvalidQuantum(format!("missing weight w{i}"))),
            }
        }
        if weights
            .keys()
            .any(|k| !important.contains(k) && !less_important.contains(k))
        {
            return Err(Error::InvalidQuantum(
                "weights given for criteria outside both groups".into(),
            ));
        }
        if let Some(mu) = confidence {
            if !(mu >= T::zero() && mu <= T::one()) {
                return Err(Error::InvalidQuantum(
                    "confidence must lie in [0, 1]".into(),
                ));
            }
        }
        Ok(Self {
            important,
            less_important,
            weights,
            confidence,
        })
    }

    pub fn important(&self) -> &[usize] {
        &self.important
    }

    pub fn less_important(&self) -> &[usize] {
        &self.less_important
    }

    pub fn weight(&self, index: usize) -> Option<T> {
        self.weights.get(&index).copied()
    }

    pub fn confidence(&self) -> Option<T> {
        self.confidence
    }

    /// The preferred direction `y'`: `+w_i` on `A`, `−w_j` on `B`, zero elsewhere.
    pub fn vector(&self, m: usize) -> Result<Vec<T>> {
        let mut y = vec![T::zero(); m];
        for (&i, &w) in &self.weights {
            if i > m {
                return Err(Error::IndexOutOfRange { index: i, count: m });
            }
            y[i - 1] = if self.important.contains(&i) { w } else { -w };
        }
        Ok(y)
    }
}

/// Free-function form of [`Quantum::vector`].
pub fn quantum_vector<T: Scalar>(q: &Quantum<T>, m: usize) -> Result<Vec<T>> {
    q.vector(m)
}

/// The two opposing quanta of the CES problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferencePair<T> {
    first: Quantum<T>,
    second: Quantum<T>,
}

/// Which of the two ratio inequalities `w_i(1)/w3(1) > w_i(2)/w3(2)` hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Consistency {
    BothHold,
    FirstOnly,
    SecondOnly,
    Inconsistent,
}

impl Consistency {
    pub fn is_consistent(self) -> bool {
        self != Consistency::Inconsistent
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Consistency::BothHold => "bothHold",
            Consistency::FirstOnly => "firstOnly",
            Consistency::SecondOnly => "secondOnly",
            Consistency::Inconsistent => "inconsistent",
        }
    }
}

impl fmt::Display for Consistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Names of the ratio inequalities, in evaluation order.
pub const CONSISTENCY_INEQUALITIES: [&str; 2] =
    ["w1(1)/w3(1) > w1(2)/w3(2)", "w2(1)/w3(1) > w2(2)/w3(2)"];

/// Names of the "gain exceeds loss" inequalities, in evaluation order.
pub const COMPROMISE_INEQUALITIES: [&str; 4] = [
    "w1(1) > w3(1)",
    "w2(1) > w3(1)",
    "w3(2) > w1(2)",
    "w3(2) > w2(2)",
];

impl<T: Scalar> PreferencePair<T> {
    /// Builds the pair from weight triples `(w1, w2, w3)` and optional confidences.
    pub fn new(
        first_weights: [T; 3],
        first_confidence: Option<T>,
        second_weights: [T; 3],
        second_confidence: Option<T>,
    ) -> Result<Self> {
        let [a1, a2, a3] = first_weights;
        let first = Quantum::new([1, 2], [3], [(1, a1), (2, a2), (3, a3)], first_confidence)?;
        let [b1, b2, b3] = second_weights;
        let second = Quantum::new([3], [1, 2], [(1, b1), (2, b2), (3, b3)], second_confidence)?;
        Ok(Self { first, second })
    }

    /// Accepts arbitrary quanta as long as they have the required group structure.
    pub fn from_quanta(first: Quantum<T>, second: Quantum<T>) -> Result<Self> {
        if first.important() != [1, 2] || first.less_important() != [3] {
            return Err(Error::InvalidQuantum(
                "first quantum must prefer {1, 2} over {3}".into(),
            ));
        }
        if second.important() != [3] || second.less_important() != [1, 2] {
            return Err(Error::InvalidQuantum(
                "second quantum must prefer {3} over {1, 2}".into(),
            ));
        }
        Ok(Self { first, second })
    }

    pub fn first(&self) -> &Quantum<T> {
        &self.first
    }

    pub fn second(&self) -> &Quantum<T> {
        &self.second
    }

    /// `(w1(1), w2(1), w3(1))`.
    pub fn first_weights(&self) -> [T; 3] {
        weights3(&self.first)
    }

    /// `(w1(2), w2(2), w3(2))`.
    pub fn second_weights(&self) -> [T; 3] {
        weights3(&self.second)
    }

    pub fn confidences(&self) -> (Option<T>, Option<T>) {
        (self.first.confidence(), self.second.confidence())
    }

    pub fn consistency(&self) -> Consistency {
        let [a1, a2, a3] = self.first_weights();
        let [b1, b2, b3] = self.second_weights();
        match (a1 / a3 > b1 / b3, a2 / a3 > b2 / b3) {
            (true, true) => Consistency::BothHold,
            (true, false) => Consistency::FirstOnly,
            (false, true) => Consistency::SecondOnly,
            (false, false) => Consistency::Inconsistent,
        }
    }

    /// Names of the violated "gain exceeds loss" inequalities; empty when all hold.
    pub fn compromise_violations(&self) -> Vec<&'static str> {
        let [a1, a2, a3] = self.first_weights();
        let [b1, b2, b3] = self.second_weights();
        [a1 > a3, a2 > a3, b3 > b1, b3 > b2]
            .into_iter()
            .zip(COMPROMISE_INEQUALITIES)
            .filter(|(holds, _)| !holds)
            .map(|(_, name)| name)
            .collect()
    }

    /// Violated ratio inequalities, for error messages.
    pub fn consistency_violations(&self) -> Vec<&'static str> {
        match self.consistency() {
            Consistency::BothHold => vec![],
            Consistency::FirstOnly => vec![CONSISTENCY_INEQUALITIES[1]],
            Consistency::SecondOnly => vec![CONSISTENCY_INEQUALITIES[0]],
            Consistency::Inconsistent => CONSISTENCY_INEQUALITIES.to_vec(),
        }
    }

    pub(crate) fn require_both_hold(&self) -> Result<()> {
        if self.consistency() == Consistency::BothHold {
            Ok(())
        } else {
            Err(Error::Inconsistent(
                self.consistency_violations().join(", "),
            ))
        }
    }
}

fn weights3<T: Scalar>(q: &Quantum<T>) -> [T; 3] {
    let w = |i| q.weight(i).expect("pair quanta carry all three weights");
    [w(1), w(2), w(3)]
}

pub fn check_consistency<T: Scalar>(pair: &PreferencePair<T>) -> Consistency {
    pair.consistency()
}

pub fn check_natural_compromise<T: Scalar>(pair: &PreferencePair<T>) -> Vec<&'static str> {
    pair.compromise_violations()
}

/// Which criterion vector a Pareto problem is posed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CriteriaKind {
    /// `(f1, f2, f3)`.
    #[serde(rename = "F3")]
    F3,
    /// `(g13, g23, g31, g32)`: both quanta applied.
    #[serde(rename = "G4")]
    G4,
    /// `(f1, f2, g13, g23)`: only the first quantum applied.
    #[serde(rename = "FBAR4")]
    FBar4,
    /// `(g31, g32, f3)`: only the second quantum applied.
    #[serde(rename = "FHAT3")]
    FHat3,
}

impl CriteriaKind {
    pub const ALL: [CriteriaKind; 4] = [
        CriteriaKind::F3,
        CriteriaKind::G4,
        CriteriaKind::FBar4,
        CriteriaKind::FHat3,
    ];

    pub fn dimension(self) -> usize {
        match self {
            CriteriaKind::F3 | CriteriaKind::FHat3 => 3,
            CriteriaKind::G4 | CriteriaKind::FBar4 => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CriteriaKind::F3 => "F3",
            CriteriaKind::G4 => "G4",
            CriteriaKind::FBar4 => "FBAR4",
            CriteriaKind::FHat3 => "FHAT3",
        }
    }
}

impl fmt::Display for CriteriaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CriteriaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CriteriaKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidScenario(format!("unknown criteria kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Resource {
    Capital,
    Labor,
}

/// One derived criterion `c_Q·f3 + c_R·f_R`, with `f_R` the negated cost of
/// the named resource. Absent terms are `None`; present ones are positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Component<T> {
    pub label: &'static str,
    pub revenue: Option<T>,
    pub resource: Option<(Resource, T)>,
}

impl<T: Scalar> Component<T> {
    fn cost(label: &'static str, resource: Resource) -> Self {
        Self {
            label,
            revenue: None,
            resource: Some((resource, T::one())),
        }
    }

    fn revenue(label: &'static str) -> Self {
        Self {
            label,
            revenue: Some(T::one()),
            resource: None,
        }
    }

    fn mixed(label: &'static str, revenue: T, resource: Resource, weight: T) -> Self {
        Self {
            label,
            revenue: Some(revenue),
            resource: Some((resource, weight)),
        }
    }

    pub fn apply(&self, f: &CriteriaVector<T>) -> T {
        let revenue = self.revenue.map_or(T::zero(), |c| c * f.f3);
        let resource = match self.resource {
            Some((Resource::Capital, c)) => c * f.f1,
            Some((Resource::Labor, c)) => c * f.f2,
            None => T::zero(),
        };
        revenue + resource
    }
}

/// A criterion vector assembled from `f` by positive linear recombination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedCriteria<T> {
    pub kind: CriteriaKind,
    pub problem: EconomicProblem<T>,
    pub components: Vec<Component<T>>,
}

impl<T: Scalar> DerivedCriteria<T> {
    /// The original criteria `(f1, f2, f3)`.
    pub fn original(problem: &EconomicProblem<T>) -> Self {
        Self {
            kind: CriteriaKind::F3,
            problem: *problem,
            components: vec![
                Component::cost("f1", Resource::Capital),
                Component::cost("f2", Resource::Labor),
                Component::revenue("f3"),
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn labels(&self) -> Vec<&'static str> {
        self.components.iter().map(|c| c.label).collect()
    }

    pub fn combine(&self, f: &CriteriaVector<T>) -> Vec<T> {
        self.components.iter().map(|c| c.apply(f)).collect()
    }

    pub fn evaluate(&self, x: &ResourceBundle<T>) -> Result<Vec<T>> {
        Ok(self.combine(&self.problem.criteria(x)?))
    }
}

fn g13<T: Scalar>(w: [T; 3]) -> Component<T> {
    Component::mixed("g13", w[0], Resource::Capital, w[2])
}

fn g23<T: Scalar>(w: [T; 3]) -> Component<T> {
    Component::mixed("g23", w[1], Resource::Labor, w[2])
}

fn g31<T: Scalar>(w: [T; 3]) -> Component<T> {
    Component::mixed("g31", w[0], Resource::Capital, w[2])
}

fn g32<T: Scalar>(w: [T; 3]) -> Component<T> {
    Component::mixed("g32", w[1], Resource::Labor, w[2])
}

/// `(g13, g23, g31, g32)` with `g13 = w1(1)·f3 + w3(1)·f1`, `g23 = w2(1)·f3 + w3(1)·f2`,
/// `g31 = w1(2)·f3 + w3(2)·f1`, `g32 = w2(2)·f3 + w3(2)·f2`.
///
/// Requires both ratio inequalities to hold.
pub fn build_g<T: Scalar>(
    pair: &PreferencePair<T>,
    problem: &EconomicProblem<T>,
) -> Result<DerivedCriteria<T>> {
    pair.require_both_hold()?;
    let w1 = pair.first_weights();
    let w2 = pair.second_weights();
    Ok(DerivedCriteria {
        kind: CriteriaKind::G4,
        problem: *problem,
        components: vec![g13(w1), g23(w1), g31(w2), g32(w2)],
    })
}

/// `(f1, f2, g13, g23)`.
pub fn build_fbar<T: Scalar>(
    pair: &PreferencePair<T>,
    problem: &EconomicProblem<T>,
) -> DerivedCriteria<T> {
    let w1 = pair.first_weights();
    DerivedCriteria {
        kind: CriteriaKind::FBar4,
        problem: *problem,
        components: vec![
            Component::cost("f1", Resource::Capital),
            Component::cost("f2", Resource::Labor),
            g13(w1),
            g23(w1),
        ],
    }
}

/// `(g31, g32, f3)`.
pub fn build_fhat<T: Scalar>(
    pair: &PreferencePair<T>,
    problem: &EconomicProblem<T>,
) -> DerivedCriteria<T> {
    let w2 = pair.second_weights();
    DerivedCriteria {
        kind: CriteriaKind::FHat3,
        problem: *problem,
        components: vec![g31(w2), g32(w2), Component::revenue("f3")],
    }
}

pub fn build_criteria<T: Scalar>(
    kind: CriteriaKind,
    pair: &PreferencePair<T>,
    problem: &EconomicProblem<T>,
) -> Result<DerivedCriteria<T>> {
    match kind {
        CriteriaKind::F3 => Ok(DerivedCriteria::original(problem)),
        CriteriaKind::G4 => build_g(pair, problem),
        CriteriaKind::FBar4 => Ok(build_fbar(pair, problem)),
        CriteriaKind::FHat3 => Ok(build_fhat(pair, problem)),
    }
}
