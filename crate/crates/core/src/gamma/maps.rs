//! Pointed maps between the finite pointed sets `[n] = {0, 1, ..., n}`,
//! partitions, and Young subgroups.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A basepoint-preserving map `[source] -> [target]`, stored by the images of
/// `1..=source`; `0 -> 0` is implicit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointedMap {
    source: usize,
    target: usize,
    images: Vec<u8>,
}

impl fmt::Debug for PointedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]->[{}] {:?}", self.source, self.target, self.images)
    }
}

impl fmt::Display for PointedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{}↦{}", i + 1, v))
            .collect();
        write!(f, "[{}]→[{}] ({})", self.source, self.target, parts.join(", "))
    }
}

impl PointedMap {
    pub fn new(target: usize, images: Vec<u8>) -> Result<Self> {
        if target > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!("level {target} too large")));
        }
        if let Some(bad) = images.iter().find(|&&v| v as usize > target) {
            return Err(Error::InvalidArgument(format!(
                "image {bad} outside [{target}]"
            )));
        }
        Ok(PointedMap {
            source: images.len(),
            target,
            images,
        })
    }

    pub(crate) fn new_unchecked(target: usize, images: Vec<u8>) -> Self {
        debug_assert!(images.iter().all(|&v| v as usize <= target));
        PointedMap {
            source: images.len(),
            target,
            images,
        }
    }

    pub fn identity(n: usize) -> Self {
        PointedMap::new_unchecked(n, (1..=n as u8).collect())
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    /// Image of `i` in `[source]`.
    pub fn eval(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.images[i - 1] as usize
        }
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &PointedMap) -> Result<PointedMap> {
        compose_maps(self, then)
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.images.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    pub fn is_bijection(&self) -> bool {
        if self.source != self.target {
            return false;
        }
        let mut seen = vec![false; self.target + 1];
        for &v in &self.images {
            if v == 0 || seen[v as usize] {
                return false;
            }
            seen[v as usize] = true;
        }
        true
    }

    /// The transposition of `i` and `j` in `Aut([n])`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<u8> = (1..=n as u8).collect();
        images.swap(i - 1, j - 1);
        PointedMap::new_unchecked(n, images)
    }

    /// Fold `[2] -> [1]`, `1, 2 ↦ 1`.
    pub fn fold() -> Self {
        PointedMap::new_unchecked(1, vec![1, 1])
    }

    /// `[2] -> [1]`, `1 ↦ 1, 2 ↦ 0`.
    pub fn keep_first() -> Self {
        PointedMap::new_unchecked(1, vec![1, 0])
    }

    /// `[2] -> [1]`, `1 ↦ 0, 2 ↦ 1`.
    pub fn keep_second() -> Self {
        PointedMap::new_unchecked(1, vec![0, 1])
    }
}

/// All pointed maps `[n] -> [m]`, lexicographically ordered by images.
pub fn enumerate_maps(n: usize, m: usize) -> Vec<PointedMap> {
    let count = (m + 1).pow(n as u32);
    let mut out = Vec::with_capacity(count);
    let mut images = vec![0u8; n];
    loop {
        out.push(PointedMap::new_unchecked(m, images.clone()));
        // Odometer increment from the last position keeps lexicographic order.
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if (images[pos] as usize) < m {
                images[pos] += 1;
                for v in images.iter_mut().skip(pos + 1) {
                    *v = 0;
                }
                break;
            }
        }
    }
}

/// `g ∘ f`, defined when `f.target == g.source`.
pub fn compose_maps(f: &PointedMap, g: &PointedMap) -> Result<PointedMap> {
    if f.target != g.source {
        return Err(Error::Composition(format!(
            "{f:?} has target [{}] but {g:?} has source [{}]",
            f.target, g.source
        )));
    }
    let images = f.images.iter().map(|&v| g.eval(v as usize) as u8).collect();
    Ok(PointedMap::new_unchecked(g.target, images))
}

/// A partition with weakly decreasing positive parts; may be empty.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// `(1, ..., 1)` with `n` parts.
    pub fn ones(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub fn single(n: usize) -> Self {
        if n == 0 {
            Partition::empty()
        } else {
            Partition { parts: vec![n] }
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `s(λ)`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_trivial_group(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    /// Index ranges `[start, end)` (0-based positions) of the blocks.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.parts.len());
        let mut start = 0;
        for &p in &self.parts {
            out.push((start, start + p));
            start += p;
        }
        out
    }

    /// `|Σ(λ)| = ∏ λ_i!`
    pub fn group_order(&self) -> u128 {
        self.parts
            .iter()
            .map(|&p| (1..=p as u128).product::<u128>())
            .product()
    }

    /// Sorts `images` within each block: the lexicographically least element
    /// of the orbit of a map under precomposition by `Σ(λ)`.
    pub fn canonicalize(&self, images: &mut [u8]) {
        let mut start = 0;
        for &p in &self.parts {
            images[start..start + p].sort_unstable();
            start += p;
        }
    }

    pub fn is_canonical(&self, images: &[u8]) -> bool {
        self.blocks()
            .iter()
            .all(|&(a, b)| images[a..b].windows(2).all(|w| w[0] <= w[1]))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if t.is_empty() || t == "∅" || t == "empty" {
            return Ok(Partition::empty());
        }
        let parts = t
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad partition `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Ordered by size, then by parts in decreasing lexicographic order, so the
/// coarsest partition of each size comes first.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All partitions of `n`, coarsest first.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions with `s(λ) <= bound`, including the empty partition.
pub fn partitions_up_to(bound: usize) -> Vec<Partition> {
    (0..=bound).flat_map(partitions_of).collect()
}

/// Adjacent transpositions inside each block: `s(λ) - k` generators of the
/// Young subgroup, as automorphisms of `[s(λ)]`.
pub fn young_generators(lambda: &Partition) -> Vec<PointedMap> {
    let n = lambda.size();
    lambda
        .blocks()
        .into_iter()
        .flat_map(|(a, b)| (a + 1..b).map(move |i| PointedMap::transposition(n, i, i + 1)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_maps(0, 5).len(), 1);
        let m = enumerate_maps(1, 1);
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].images(), &[0]);
        assert_eq!(m[1].images(), &[1]);
        assert_eq!(enumerate_maps(2, 2).len(), 9);
        for n in 0..=6 {
            for k in 0..=6 {
                let maps = enumerate_maps(n, k);
                assert_eq!(maps.len(), (k + 1).pow(n as u32));
                assert!(maps.windows(2).all(|w| w[0].images() < w[1].images()));
            }
        }
    }

    #[test]
    fn compose_examples() {
        let g = PointedMap::new(3, vec![2, 0]).unwrap();
        assert_eq!(compose_maps(&PointedMap::identity(2), &g).unwrap(), g);
        let to_base = PointedMap::new(0, vec![0]).unwrap();
        let c = compose_maps(&PointedMap::fold(), &to_base).unwrap();
        assert_eq!(c, PointedMap::new(0, vec![0, 0]).unwrap());
        let f = PointedMap::new(2, vec![2]).unwrap();
        let swap = PointedMap::transposition(2, 1, 2);
        assert_eq!(compose_maps(&f, &swap).unwrap().images(), &[1]);
        assert!(matches!(
            compose_maps(&swap, &f),
            Err(Error::Composition(_))
        ));
    }

    #[test]
    fn young_generator_examples() {
        assert!(young_generators(&Partition::ones(3)).is_empty());
        let g = young_generators(&Partition::single(3));
        assert_eq!(
            g,
            vec![PointedMap::transposition(3, 1, 2), PointedMap::transposition(3, 2, 3)]
        );
        let g = young_generators(&Partition::new(vec![2, 1]).unwrap());
        assert_eq!(g, vec![PointedMap::transposition(3, 1, 2)]);
        let l = Partition::new(vec![1, 3, 2]).unwrap();
        assert_eq!(young_generators(&l).len(), l.size() - l.len());
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partitions_up_to(0), vec![Partition::empty()]);
        let two: Vec<String> = partitions_up_to(2).iter().map(ToString::to_string).collect();
        assert_eq!(two, vec!["∅", "(1)", "(2)", "(1,1)"]);
        assert_eq!(partitions_up_to(4).len(), 12);
        let counts: Vec<usize> = (0..=6).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11]);
        let all = partitions_up_to(5);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!("(2,1)".parse::<Partition>().unwrap().parts(), &[2, 1]);
        assert_eq!("∅".parse::<Partition>().unwrap(), Partition::empty());
    }

    proptest! {
        #[test]
        fn composition_is_associative(a in 0usize..4, b in 0usize..4, c in 0usize..4, d in 0usize..4, seed in any::<u64>()) {
            let pick = |n: usize, m: usize, s: u64| {
                let maps = enumerate_maps(n, m);
                maps[(s as usize) % maps.len()].clone()
            };
            let f = pick(a, b, seed);
            let g = pick(b, c, seed / 7);
            let h = pick(c, d, seed / 49);
            let left = compose_maps(&compose_maps(&f, &g).unwrap(), &h).unwrap();
            let right = compose_maps(&f, &compose_maps(&g, &h).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
