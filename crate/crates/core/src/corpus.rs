//! Families of small preference structures used by the exhaustive sweeps.

use std::sync::OnceLock;

use num_rational::BigRational;

use crate::bits::BitMatrix;
use crate::bridge::construct_preferences;
use crate::error::Result;
use crate::models::{
    evenly_spaced_utilities, expectation_structure, nonstandard_structure, ranked_structure,
    EpsPoly, EpsilonNumber, ProbabilityModel, RankedModel,
};
use crate::preference::PreferenceStructure;
use crate::search::enumerate_gqps;
use crate::space::{ConsequenceSpace, DecisionSpace, StateSpace, DEFAULT_ACT_CAP};

/// Largest class count whose preorders are listed exhaustively.
pub const MAX_EXHAUSTIVE_CLASSES: usize = 5;

/// Largest extensional space [`structure_corpus`] enumerates.
const CORPUS_TABLE_LIMIT: u128 = 10_000;

/// All preorders on `k` labelled elements, as `k × k` matrices.
pub fn preorders(k: usize) -> &'static [BitMatrix] {
    static CACHE: [OnceLock<Vec<BitMatrix>>; MAX_EXHAUSTIVE_CLASSES + 1] =
        [const { OnceLock::new() }; MAX_EXHAUSTIVE_CLASSES + 1];
    CACHE[k].get_or_init(|| {
        let off: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let mut out = Vec::new();
        for mask in 0u64..(1 << off.len()) {
            let mut m = BitMatrix::new(k);
            for i in 0..k {
                m.set(i, i, true);
            }
            for (bit, &(i, j)) in off.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    m.set(i, j, true);
                }
            }
            let transitive = (0..k).all(|i| {
                (0..k).all(|j| !m.get(i, j) || (0..k).all(|l| !m.get(j, l) || m.get(i, l)))
            });
            if transitive {
                out.push(m);
            }
        }
        out
    })
}


/// Acts grouped by their restriction to each event.
pub(crate) struct Classes {
    space: DecisionSpace,
    /// `class[A][f]`
    class: Vec<Vec<usize>>,
    pub(crate) counts: Vec<usize>,
}

impl Classes {
    pub(crate) fn new(space: DecisionSpace) -> Result<Self> {
        let n_acts = space.n_acts(DEFAULT_ACT_CAP)?;
        let m = space.n_consequences();
        let mut class = Vec::new();
        let mut counts = Vec::new();
        for a in space.states().events() {
            class.push(
                (0..n_acts)
                    .map(|f| a.states().fold(0, |acc, s| acc * m + space.value(f, s)))
                    .collect(),
            );
            counts.push(m.pow(a.len() as u32));
        }
        Ok(Self { space, class, counts })
    }

    pub(crate) fn structure(&self, orders: &[&BitMatrix]) -> PreferenceStructure {
        let n_acts = self.class[0].len();
        let tables = orders
            .iter()
            .enumerate()
            .map(|(a, p)| {
                let cl = &self.class[a];
                BitMatrix::from_fn(n_acts, |f, g| p.get(cl[f], cl[g]))
            })
            .collect();
        PreferenceStructure::from_tables(self.space.clone(), tables, DEFAULT_ACT_CAP)
            .expect("tables match the space")
    }

    /// Size of the extensional space, when every event is enumerable.
    pub(crate) fn exhaustive_size(&self) -> Option<u128> {
        self.counts.iter().try_fold(1u128, |acc, &k| {
            (k <= MAX_EXHAUSTIVE_CLASSES).then(|| acc.saturating_mul(preorders(k).len() as u128))
        })
    }

    pub(crate) fn decode(&self, mut index: u128) -> Vec<&'static BitMatrix> {
        self.counts
            .iter()
            .map(|&k| {
                let list = preorders(k);
                let digit = (index % list.len() as u128) as usize;
                index /= list.len() as u128;
                &list[digit]
            })
            .collect()
    }
}


/// Permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}


/// Structures from the three models, plus unanimity of pairs of them.
pub fn model_structures(n: usize, m: usize) -> Result<Vec<(String, PreferenceStructure)>> {
    let sp = DecisionSpace::new(StateSpace::new(n)?, ConsequenceSpace::chain(m)?);
    let utilities = evenly_spaced_utilities(m);
    let mut out = Vec::new();
    let uniform = expectation_structure(&sp, &ProbabilityModel::uniform(&sp, utilities.clone())?)?;
    out.push(("expectation uniform".into(), uniform.clone()));
    // state i has weight ε^i, state 0 the rest; then the reverse assignment
    for reverse in [false, true] {
        let mut weights: Vec<EpsilonNumber> = (0..n)
            .map(|i| {
                let mut c = vec![BigRational::from_integer(0.into()); i + 1];
                c[i] = BigRational::from_integer(1.into());
                EpsilonNumber::from_poly(EpsPoly::new(c))
            })
            .collect();
        let rest = weights[1..]
            .iter()
            .fold(EpsilonNumber::one(), |acc, w| &acc - w);
        weights[0] = rest;
        if reverse {
            weights.reverse();
        }
        let model = ProbabilityModel::new(&sp, weights, utilities.clone())?;
        out.push((format!("nonstandard reverse={reverse}"), nonstandard_structure(&sp, &model)?));
    }
    // weight proportional to 1 + index
    let total = (n * (n + 1) / 2) as i64;
    let skewed_weights = (0..n)
        .map(|i| EpsilonNumber::from_rational(BigRational::new((i as i64 + 1).into(), total.into())))
        .collect();
    let skewed = expectation_structure(&sp, &ProbabilityModel::new(&sp, skewed_weights, utilities.clone())?)?;
    out.push(("unanimity expectation uniform skewed".into(), uniform.unanimity(&skewed)?));
    out.push(("expectation skewed".into(), skewed));
    for p in permutations(n) {
        let ranked = ranked_structure(&sp, &RankedModel::new(p.clone())?)?;
        out.push((format!("unanimity expectation ranked {p:?}"), uniform.unanimity(&ranked)?));
        out.push((format!("ranked {p:?}"), ranked));
    }
    Ok(out)
}


/// Every structure with `≤_A` a preorder that depends only on values in `A`,
/// when there are at most `limit` of them.
pub fn preorder_structures(n: usize, m: usize, limit: u128) -> Result<Option<Vec<PreferenceStructure>>> {
    let classes = Classes::new(DecisionSpace::new(StateSpace::new(n)?, ConsequenceSpace::chain(m)?))?;
    Ok(match classes.exhaustive_size() {
        Some(size) if size <= limit => Some((0..size).map(|i| classes.structure(&classes.decode(i))).collect()),
        _ => None,
    })
}

/// Model structures for `1 ≤ n ≤ max_states`, `2 ≤ m ≤ max_consequences`,
/// the constructions over every g.q.p. on up to three states, and every
/// preorder-valued table structure in spaces small enough to list.
pub fn structure_corpus(max_states: usize, max_consequences: usize) -> Result<Vec<(String, PreferenceStructure)>> {
    let mut out = Vec::new();
    for n in 1..=max_states {
        for m in 2..=max_consequences {
            for (label, ps) in model_structures(n, m)? {
                out.push((format!("n={n} m={m} {label}"), ps));
            }
            if let Some(list) = preorder_structures(n, m, CORPUS_TABLE_LIMIT)? {
                for (i, ps) in list.into_iter().enumerate() {
                    out.push((format!("n={n} m={m} table #{i}"), ps));
                }
            }
        }
        if max_consequences >= 2 && n <= 3 {
            for (i, rel) in enumerate_gqps(n, u64::MAX)?.relations.iter().enumerate() {
                out.push((format!("n={n} constructed #{i}"), construct_preferences(rel)?));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preorder_counts() {
        let counts: Vec<usize> = (0..=4).map(|k| preorders(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
    }

    #[test]
    fn two_by_two_space_size() {
        let sp = DecisionSpace::new(StateSpace::new(2).unwrap(), ConsequenceSpace::chain(2).unwrap());
        assert_eq!(Classes::new(sp).unwrap().exhaustive_size(), Some(5680));
    }

    #[test]
    fn permutations_are_ordered() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[0], vec![0, 1, 2]);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }
}
