//! Isotropy indices, their inclusion order, and blow-up schedules.
//!
//! A matrix whose ascending eigenvalues form blocks of equal values gets the
//! index {0, i_1, ..., i_{k-1}, n} of cumulative block boundaries. Indices
//! are partially ordered by set inclusion: the smallest is {0, n} (multiples
//! of the identity, isotropy group U(n)), the largest is {0, 1, ..., n}
//! (simple spectrum). Resolution schedules list blow-up centers level by
//! level so that a center always precedes every center strictly containing
//! its index, with lexicographic order inside a level.

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::riesz;

/// Cumulative multiplicity boundaries of an eigenvalue clustering.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsotropyIndex {
    indices: Vec<usize>,
}

impl IsotropyIndex {
    /// Build from boundaries; must start at 0, end at n, strictly increase.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.len() < 2 || indices[0] != 0 {
            return Err(Error::EmptyInput);
        }
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::DimensionMismatch {
                left: indices[0],
                right: indices[indices.len() - 1],
            });
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Ambient dimension n.
    pub fn n(&self) -> usize {
        *self.indices.last().unwrap()
    }

    /// Number of clusters.
    pub fn cluster_count(&self) -> usize {
        self.indices.len() - 1
    }

    /// Cluster sizes i_k - i_{k-1}.
    pub fn multiplicities(&self) -> Vec<usize> {
        self.indices.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// True when every eigenvalue is simple.
    pub fn is_simple(&self) -> bool {
        self.indices.len() == self.n() + 1
    }
}

/// Inclusion partial order on indices over the same n.
pub fn leq(i: &IsotropyIndex, j: &IsotropyIndex) -> Result<bool> {
    if i.n() != j.n() {
        return Err(Error::DimensionMismatch {
            left: i.n(),
            right: j.n(),
        });
    }
    Ok(i.indices.iter().all(|v| j.indices.contains(v)))
}

/// Compute the isotropy index of an ascending spectrum, clustering with the
/// same relative-tolerance rule as gap detection.
pub fn isotropy_index(values: &[f64], rel_tol: f64) -> Result<IsotropyIndex> {
    let partition = riesz::detect_gaps(values, rel_tol)?;
    let mut indices = vec![0usize];
    let mut acc = 0;
    for &s in &partition.sizes {
        acc += s;
        indices.push(acc);
    }
    IsotropyIndex::new(indices)
}

/// Split an index at a gap boundary k into indices over k and n - k.
///
/// The left part keeps the elements up to k; the right part is the elements
/// from k on, shifted down by k. k must be an element of the index,
/// otherwise the spectral-gap hypothesis is violated.
pub fn split_index(i: &IsotropyIndex, k: usize) -> Result<(IsotropyIndex, IsotropyIndex)> {
    if !i.indices.contains(&k) || k == 0 || k == i.n() {
        return Err(Error::GapViolation { at: k });
    }
    let left: Vec<usize> = i.indices.iter().copied().filter(|&v| v <= k).collect();
    let right: Vec<usize> = i
        .indices
        .iter()
        .copied()
        .filter(|&v| v >= k)
        .map(|v| v - k)
        .collect();
    Ok((IsotropyIndex::new(left)?, IsotropyIndex::new(right)?))
}

/// Merge two split parts back, shifting the right side by k.
pub fn merge_index(left: &IsotropyIndex, right: &IsotropyIndex) -> Result<IsotropyIndex> {
    let k = left.n();
    let mut indices = left.indices.clone();
    indices.extend(right.indices.iter().skip(1).map(|v| v + k));
    IsotropyIndex::new(indices)
}

/// Which of the three resolutions a schedule belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResolutionKind {
    /// Radial blow-up of all singular strata (the resolution whose
    /// eigenline bundles globalize).
    Radial,
    /// Projective blow-up of the same centers in the same order.
    Projective,
    /// Radial blow-up of the chain centers {l_i = ... = l_j} only.
    Small,
}

impl ResolutionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ResolutionKind::Radial => "radial",
            ResolutionKind::Projective => "projective",
            ResolutionKind::Small => "small",
        }
    }
}

/// A single blow-up center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlowupCenter {
    /// The stratum S^I of a full isotropy index (radial/projective schedules).
    FullStratum(IsotropyIndex),
    /// The chain {l_i = l_{i+1} = ... = l_j}, 1 <= i < j <= n (small schedule).
    Chain(usize, usize),
}

/// An ordered-by-levels list of blow-up centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupSchedule {
    pub resolution: ResolutionKind,
    pub n: usize,
    pub levels: Vec<Vec<BlowupCenter>>,
}

impl BlowupSchedule {
    pub fn center_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn centers(&self) -> impl Iterator<Item = &BlowupCenter> {
        self.levels.iter().flatten()
    }
}

/// Generate the blow-up schedule for one of the three resolutions.
///
/// Radial and projective schedules enumerate the strata S^I level by level,
/// |I| = 2 up to n (the simple-spectrum index is the open dense stratum and
/// is never a center), listing within a level all index sets with the given
/// cardinality in lexicographic order. Small schedules list the chains
/// (i, j) by length j - i descending, lexicographic within a level.
pub fn schedule(n: usize, resolution: ResolutionKind) -> Result<BlowupSchedule> {
    if !(2..=12).contains(&n) {
        return Err(Error::UnsupportedN { n });
    }
    let levels = match resolution {
        ResolutionKind::Radial | ResolutionKind::Projective => {
            let mut levels = Vec::new();
            for size in 2..=n {
                let mut level = Vec::new();
                let interior = size - 2;
                for combo in combinations(n - 1, interior) {
                    let mut indices = Vec::with_capacity(size);
                    indices.push(0);
                    indices.extend(combo.iter().map(|&c| c + 1));
                    indices.push(n);
                    level.push(BlowupCenter::FullStratum(IsotropyIndex::new(indices)?));
                }
                levels.push(level);
            }
            levels
        }
        ResolutionKind::Small => {
            let mut levels = Vec::new();
            for len in (1..n).rev() {
                let mut level = Vec::new();
                for i in 1..=(n - len) {
                    level.push(BlowupCenter::Chain(i, i + len));
                }
                levels.push(level);
            }
            levels
        }
    };
    Ok(BlowupSchedule {
        resolution,
        n,
        levels,
    })
}

/// All k-element subsets of {0, .., pool-1}, lexicographic.
fn combinations(pool: usize, k: usize) -> Vec<Vec<usize>> {
    fn recurse(
        pool: usize,
        k: usize,
        start: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for v in start..pool {
            current.push(v);
            recurse(pool, k, v + 1, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    recurse(pool, k, 0, &mut current, &mut out);
    out
}

// Wire format: {"I":[0,2,4]} for strata, {"chain":[1,3]} for chains.
impl Serialize for BlowupCenter {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(1))?;
        match self {
            BlowupCenter::FullStratum(i) => map.serialize_entry("I", i.indices())?,
            BlowupCenter::Chain(i, j) => map.serialize_entry("chain", &[i, j])?,
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for BlowupCenter {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Repr {
            #[serde(rename = "I")]
            index: Option<Vec<usize>>,
            chain: Option<Vec<usize>>,
        }
        let repr = Repr::deserialize(deserializer)?;
        match (repr.index, repr.chain) {
            (Some(indices), None) => IsotropyIndex::new(indices)
                .map(BlowupCenter::FullStratum)
                .map_err(D::Error::custom),
            (None, Some(pair)) if pair.len() == 2 => Ok(BlowupCenter::Chain(pair[0], pair[1])),
            _ => Err(D::Error::custom("expected {\"I\": [...]} or {\"chain\": [i, j]}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{eigendecompose, random_unitary, HermitianMatrix};

    fn index(v: &[usize]) -> IsotropyIndex {
        IsotropyIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn index_of_repeated_pair() {
        let i = isotropy_index(&[1.0, 1.0, 2.0], 1e-6).unwrap();
        assert_eq!(i.indices(), &[0, 2, 3]);
    }

    #[test]
    fn index_of_identity_multiple() {
        let i = isotropy_index(&[4.0, 4.0, 4.0], 1e-6).unwrap();
        assert_eq!(i.indices(), &[0, 3]);
        assert_eq!(i.cluster_count(), 1);
    }

    #[test]
    fn index_of_simple_spectrum() {
        let i = isotropy_index(&[1.0, 2.0, 3.0], 1e-6).unwrap();
        assert_eq!(i.indices(), &[0, 1, 2, 3]);
        assert!(i.is_simple());
    }

    #[test]
    fn leq_is_inclusion() {
        assert!(leq(&index(&[0, 3]), &index(&[0, 1, 3])).unwrap());
        assert!(!leq(&index(&[0, 1, 3]), &index(&[0, 2, 3])).unwrap());
        assert!(!leq(&index(&[0, 2, 3]), &index(&[0, 1, 3])).unwrap());
        assert!(leq(&index(&[0, 2, 3]), &index(&[0, 2, 3])).unwrap());
        assert!(matches!(
            leq(&index(&[0, 2]), &index(&[0, 3])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn split_two_three_partition() {
        let i = index(&[0, 2, 5]);
        let (l, r) = split_index(&i, 2).unwrap();
        assert_eq!(l.indices(), &[0, 2]);
        assert_eq!(r.indices(), &[0, 3]);
    }

    #[test]
    fn split_simple_spectrum() {
        let i = index(&[0, 1, 2, 3]);
        let (l, r) = split_index(&i, 1).unwrap();
        assert_eq!(l.indices(), &[0, 1]);
        assert_eq!(r.indices(), &[0, 1, 2]);
    }

    #[test]
    fn split_rejects_non_member() {
        let i = index(&[0, 3]);
        assert!(matches!(split_index(&i, 1), Err(Error::GapViolation { at: 1 })));
    }

    #[test]
    fn split_merge_round_trip() {
        let i = index(&[0, 2, 3, 5, 7]);
        for &k in &[2usize, 3, 5] {
            let (l, r) = split_index(&i, k).unwrap();
            let merged = merge_index(&l, &r).unwrap();
            assert_eq!(merged, i);
        }
    }

    #[test]
    fn schedule_n3_radial() {
        let s = schedule(3, ResolutionKind::Radial).unwrap();
        assert_eq!(s.levels.len(), 2);
        assert_eq!(s.levels[0], vec![BlowupCenter::FullStratum(index(&[0, 3]))]);
        assert_eq!(
            s.levels[1],
            vec![
                BlowupCenter::FullStratum(index(&[0, 1, 3])),
                BlowupCenter::FullStratum(index(&[0, 2, 3])),
            ]
        );
        assert_eq!(s.center_count(), 3);
    }

    #[test]
    fn schedule_n4_small() {
        let s = schedule(4, ResolutionKind::Small).unwrap();
        let flat: Vec<&BlowupCenter> = s.centers().collect();
        let want = [(1, 4), (1, 3), (2, 4), (1, 2), (2, 3), (3, 4)];
        assert_eq!(flat.len(), want.len());
        for (got, want) in flat.iter().zip(want.iter()) {
            assert_eq!(**got, BlowupCenter::Chain(want.0, want.1));
        }
    }

    #[test]
    fn schedule_n2_single_center() {
        let radial = schedule(2, ResolutionKind::Radial).unwrap();
        assert_eq!(radial.center_count(), 1);
        assert_eq!(radial.levels[0], vec![BlowupCenter::FullStratum(index(&[0, 2]))]);
        let small = schedule(2, ResolutionKind::Small).unwrap();
        assert_eq!(small.center_count(), 1);
        assert_eq!(small.levels[0], vec![BlowupCenter::Chain(1, 2)]);
    }

    #[test]
    fn schedule_rejects_out_of_range() {
        assert!(matches!(schedule(1, ResolutionKind::Radial), Err(Error::UnsupportedN { n: 1 })));
        assert!(matches!(schedule(13, ResolutionKind::Small), Err(Error::UnsupportedN { n: 13 })));
    }

    fn binomial(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        let mut acc = 1usize;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn schedule_counting_and_order_up_to_8() {
        for n in 2..=8 {
            let s = schedule(n, ResolutionKind::Radial).unwrap();
            let want: usize = (2..=n).map(|m| binomial(n - 1, m - 2)).sum();
            assert_eq!(s.center_count(), want, "count at n={n}");
            // order soundness: I strictly before any I' with I subset I'
            let flat: Vec<(usize, &IsotropyIndex)> = s
                .levels
                .iter()
                .enumerate()
                .flat_map(|(lvl, cs)| {
                    cs.iter().map(move |c| match c {
                        BlowupCenter::FullStratum(i) => (lvl, i),
                        _ => unreachable!(),
                    })
                })
                .collect();
            for (la, a) in &flat {
                for (lb, b) in &flat {
                    if a != b && leq(a, b).unwrap() {
                        assert!(la < lb, "n={n}: {:?} must precede {:?}", a, b);
                    }
                }
            }

            let small = schedule(n, ResolutionKind::Small).unwrap();
            assert_eq!(small.center_count(), n * (n - 1) / 2);
            let chains: Vec<(usize, (usize, usize))> = small
                .levels
                .iter()
                .enumerate()
                .flat_map(|(lvl, cs)| {
                    cs.iter().map(move |c| match c {
                        BlowupCenter::Chain(i, j) => (lvl, (*i, *j)),
                        _ => unreachable!(),
                    })
                })
                .collect();
            for (la, (i1, j1)) in &chains {
                for (lb, (i2, j2)) in &chains {
                    let strictly_inside = (i1 <= i2 && j2 <= j1) && (i1, j1) != (i2, j2);
                    if strictly_inside {
                        assert!(la < lb, "n={n}: ({i1},{j1}) must precede ({i2},{j2})");
                    }
                }
            }
        }
    }

    #[test]
    fn index_is_conjugation_invariant() {
        let diag = [1.0, 1.0, 2.0, 5.0, 5.0];
        let x = HermitianMatrix::from_real_diagonal(&diag);
        let ix = isotropy_index(&diag, 1e-6).unwrap();
        for seed in 0..10 {
            let g = random_unitary(5, seed);
            let y = x.conjugate_by(&g).unwrap();
            let values = eigendecompose(&y).unwrap().values;
            let iy = isotropy_index(&values, 1e-6).unwrap();
            assert_eq!(ix, iy);
        }
    }

    #[test]
    fn center_json_round_trip() {
        let s = schedule(3, ResolutionKind::Radial).unwrap();
        let json = serde_json::to_string(&s.levels).unwrap();
        assert_eq!(json, r#"[[{"I":[0,3]}],[{"I":[0,1,3]},{"I":[0,2,3]}]]"#);
        let back: Vec<Vec<BlowupCenter>> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s.levels);
        let small = schedule(2, ResolutionKind::Small).unwrap();
        let json = serde_json::to_string(&small.levels).unwrap();
        assert_eq!(json, r#"[[{"chain":[1,2]}]]"#);
    }
}
