//! Partitions of the index set of two closed trace paths and the multigraphs
//! they induce.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use super::partitions::for_each_partition;
use crate::atoms::{AtomSpec, Moment};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest supported `k1 + k2`.
pub const MAX_TOTAL_LENGTH: usize = 12;

/// Positions of two closed paths of lengths `k1` and `k2`, with each closing
/// point already identified with its starting point.
///
/// Path 1 occupies positions `0..k1`, path 2 occupies `k1..k1+k2`. Position
/// `0` (resp. `k1`) is the endpoint of path 1 (resp. 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexSetE {
    pub k1: usize,
    pub k2: usize,
}

impl IndexSetE {
    pub fn new(k1: usize, k2: usize) -> Result<Self> {
        if k1 == 0 || k2 == 0 {
            return Err(Error::InvalidArgument("path lengths must be positive".into()));
        }
        if k1 + k2 > MAX_TOTAL_LENGTH {
            return Err(Error::SizeCap(format!("k1 + k2 = {} exceeds {MAX_TOTAL_LENGTH}", k1 + k2)));
        }
        Ok(IndexSetE { k1, k2 })
    }

    pub fn len(&self) -> usize {
        self.k1 + self.k2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn path_length(&self, path: usize) -> usize {
        if path == 0 {
            self.k1
        } else {
            self.k2
        }
    }

    /// First position of a path; it is also the path's endpoint.
    pub fn start(&self, path: usize) -> usize {
        if path == 0 {
            0
        } else {
            self.k1
        }
    }

    /// Steps `(from, to)` of a path, in traversal order.
    pub fn steps(&self, path: usize) -> impl Iterator<Item = (usize, usize)> {
        let start = self.start(path);
        let k = self.path_length(path);
        (0..k).map(move |m| (start + m, start + (m + 1) % k))
    }
}

/// One distinct edge `{a, b}` (`a ≤ b`) of `G_π` with its traversal counts.
/// `forward[ℓ]` counts steps `a → b` by path `ℓ`, `backward[ℓ]` steps `b → a`.
/// For a loop every step is counted as forward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeUse {
    pub a: u8,
    pub b: u8,
    pub forward: [u32; 2],
    pub backward: [u32; 2],
}

impl EdgeUse {
    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    pub fn count(&self, path: usize) -> u32 {
        self.forward[path] + self.backward[path]
    }

    pub fn total(&self) -> u32 {
        self.count(0) + self.count(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphClass {
    Tree,
    Bracelet,
    Other,
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            GraphClass::Tree => "tree",
            GraphClass::Bracelet => "bracelet",
            GraphClass::Other => "other",
        })
    }
}

/// Product over blocks of the smallest boundary label. Only the endpoint
/// blocks carry a label different from 1, so two shapes occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SWeight {
    /// Both endpoints in one block: `min(s1, s2)`.
    Min,
    /// Endpoints in different blocks: `s1·s2`.
    Product,
}

impl SWeight {
    pub fn eval(&self, s1: &Rational, s2: &Rational) -> Rational {
        match self {
            SWeight::Min => s1.min(s2).clone(),
            SWeight::Product => s1 * s2,
        }
    }

    pub fn eval_f64(&self, s1: f64, s2: f64) -> f64 {
        match self {
            SWeight::Min => s1.min(s2),
            SWeight::Product => s1 * s2,
        }
    }
}

impl fmt::Display for SWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            SWeight::Min => "min(s1,s2)",
            SWeight::Product => "s1*s2",
        })
    }
}

/// A partition of [`IndexSetE`] together with its graph data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTerm {
    pub set: IndexSetE,
    /// Block label of every position (restricted-growth string).
    pub labels: Vec<u8>,
    pub block_count: usize,
    pub edges: Vec<EdgeUse>,
    pub class: GraphClass,
    pub weight: SWeight,
}

impl PartitionTerm {
    pub fn from_labels(set: IndexSetE, labels: &[u8]) -> Self {
        let block_count = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let mut edges: Vec<EdgeUse> = Vec::new();
        for path in 0..2 {
            for (from, to) in set.steps(path) {
                let (x, y) = (labels[from], labels[to]);
                let (a, b) = (x.min(y), x.max(y));
                let idx = match edges.iter().position(|e| e.a == a && e.b == b) {
                    Some(i) => i,
                    None => {
                        edges.push(EdgeUse { a, b, forward: [0; 2], backward: [0; 2] });
                        edges.len() - 1
                    }
                };
                if x <= y {
                    edges[idx].forward[path] += 1;
                } else {
                    edges[idx].backward[path] += 1;
                }
            }
        }
        let class = classify(block_count, &edges);
        let weight = if labels[set.start(0)] == labels[set.start(1)] {
            SWeight::Min
        } else {
            SWeight::Product
        };
        PartitionTerm { set, labels: labels.to_vec(), block_count, edges, class, weight }
    }

    /// `s_π` at the given times.
    pub fn s_weight(&self, s1: &Rational, s2: &Rational) -> Rational {
        self.weight.eval(s1, s2)
    }

    /// `E[P₁P₂] − E[P₁]E[P₂]` with `P_ℓ` the product of entries along path `ℓ`.
    pub fn expectation_factor(&self, diag: &AtomSpec, off: &AtomSpec) -> Result<Rational> {
        MomentTable::new(diag, off).factor(self)
    }

    /// Blocks written as `{0,3}{1,2}` with positions of path 2 primed.
    pub fn blocks_string(&self) -> String {
        let mut out = String::new();
        for block in 0..self.block_count as u8 {
            out.push('{');
            let members: Vec<String> = self
                .labels
                .iter()
                .enumerate()
                .filter(|(_, &l)| l == block)
                .map(|(pos, _)| {
                    if pos < self.set.k1 {
                        pos.to_string()
                    } else {
                        format!("{}'", pos - self.set.k1)
                    }
                })
                .collect();
            out.push_str(&members.join(","));
            out.push('}');
        }
        out
    }
}

fn classify(vertices: usize, edges: &[EdgeUse]) -> GraphClass {
    if edges.iter().any(EdgeUse::is_loop) {
        return GraphClass::Other;
    }
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let mut degree = vec![0usize; vertices];
    let mut components = vertices;
    for e in edges {
        let (a, b) = (e.a as usize, e.b as usize);
        degree[a] += 1;
        degree[b] += 1;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    if components != 1 {
        return GraphClass::Other;
    }
    if edges.len() + 1 == vertices {
        GraphClass::Tree
    } else if edges.len() == vertices && vertices >= 3 && degree.iter().all(|&d| d == 2) {
        GraphClass::Bracelet
    } else {
        GraphClass::Other
    }
}

/// Memoized joint moments of the diagonal and off-diagonal laws.
pub(crate) struct MomentTable<'a> {
    diag: &'a AtomSpec,
    off: &'a AtomSpec,
    complex: bool,
    diag_cache: HashMap<u32, Moment>,
    off_cache: HashMap<(u32, u32), Moment>,
}

impl<'a> MomentTable<'a> {
    pub(crate) fn new(diag: &'a AtomSpec, off: &'a AtomSpec) -> Self {
        MomentTable {
            diag,
            off,
            complex: off.is_complex(),
            diag_cache: HashMap::new(),
            off_cache: HashMap::new(),
        }
    }

    fn diag_moment(&mut self, k: u32) -> Result<Rational> {
        if !self.diag_cache.contains_key(&k) {
            let m = self.diag.moment(k, 0)?;
            self.diag_cache.insert(k, m);
        }
        match &self.diag_cache[&k] {
            Moment::Finite(r) => Ok(r.clone()),
            Moment::Infinite => Err(Error::InfiniteMoment { spec: self.diag.to_string(), a: k, b: 0 }),
        }
    }

    fn off_moment(&mut self, forward: u32, backward: u32) -> Result<Rational> {
        let key = if self.complex { (forward, backward) } else { (forward + backward, 0) };
        if !self.off_cache.contains_key(&key) {
            let m = self.off.moment(key.0, key.1)?;
            self.off_cache.insert(key, m);
        }
        match &self.off_cache[&key] {
            Moment::Finite(r) => Ok(r.clone()),
            Moment::Infinite => Err(Error::InfiniteMoment { spec: self.off.to_string(), a: key.0, b: key.1 }),
        }
    }

    fn edge_moment(&mut self, e: &EdgeUse, paths: &[usize]) -> Result<Rational> {
        let f: u32 = paths.iter().map(|&p| e.forward[p]).sum();
        let b: u32 = paths.iter().map(|&p| e.backward[p]).sum();
        if e.is_loop() {
            self.diag_moment(f + b)
        } else {
            self.off_moment(f, b)
        }
    }

    pub(crate) fn factor(&mut self, term: &PartitionTerm) -> Result<Rational> {
        // An edge seen once in total contributes a first moment to both products.
        if term.edges.iter().any(|e| e.total() == 1) {
            return Ok(Rational::zero());
        }
        // Paths without a common edge are independent.
        if !term.edges.iter().any(|e| e.count(0) > 0 && e.count(1) > 0) {
            return Ok(Rational::zero());
        }
        let mut joint = Rational::one();
        let mut first = Rational::one();
        let mut second = Rational::one();
        for e in &term.edges {
            joint *= self.edge_moment(e, &[0, 1])?;
            if e.count(0) > 0 {
                first *= self.edge_moment(e, &[0])?;
            }
            if e.count(1) > 0 {
                second *= self.edge_moment(e, &[1])?;
            }
        }
        Ok(joint - first * second)
    }
}

/// Visits every partition of `E(k1, k2)` with exactly `(k1+k2)/2` blocks.
/// Odd totals visit nothing.
pub fn for_each_term(k1: usize, k2: usize, mut visit: impl FnMut(PartitionTerm) -> Result<()>) -> Result<()> {
    let set = IndexSetE::new(k1, k2)?;
    if set.len() % 2 == 1 {
        return Ok(());
    }
    let mut outcome = Ok(());
    for_each_partition(set.len(), Some(set.len() / 2), |labels, _| {
        if outcome.is_ok() {
            outcome = visit(PartitionTerm::from_labels(set, labels));
        }
    });
    outcome
}

/// Collects [`for_each_term`]. At the size cap this is over a million terms;
/// prefer the visitor there.
pub fn enumerate_terms(k1: usize, k2: usize) -> Result<Vec<PartitionTerm>> {
    let mut terms = Vec::new();
    for_each_term(k1, k2, |t| {
        terms.push(t);
        Ok(())
    })?;
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::AtomSpec;
    use crate::rational::{int, ratio};

    fn goe_diag() -> AtomSpec {
        AtomSpec::gauss_real(int(2))
    }

    #[test]
    fn one_one_has_single_loop_term() {
        let terms = enumerate_terms(1, 1).unwrap();
        assert_eq!(terms.len(), 1);
        let t = &terms[0];
        assert_eq!(t.block_count, 1);
        assert_eq!(t.edges.len(), 1);
        assert!(t.edges[0].is_loop());
        assert_eq!(t.edges[0].count(0), 1);
        assert_eq!(t.edges[0].count(1), 1);
        assert_eq!(t.class, GraphClass::Other);
        let v = ratio(7, 3);
        let f = t.expectation_factor(&AtomSpec::gauss_real(v.clone()), &AtomSpec::rademacher()).unwrap();
        assert_eq!(f, v);
    }

    #[test]
    fn two_two_has_two_tree_terms() {
        let off = AtomSpec::two_point_m4(int(5)).unwrap();
        let nonzero: Vec<_> = enumerate_terms(2, 2)
            .unwrap()
            .into_iter()
            .filter(|t| !t.expectation_factor(&goe_diag(), &off).unwrap().is_zero())
            .collect();
        assert_eq!(nonzero.len(), 2);
        for t in &nonzero {
            assert_eq!(t.class, GraphClass::Tree);
            assert_eq!(t.expectation_factor(&goe_diag(), &off).unwrap(), int(4));
        }
        let mut weights: Vec<_> = nonzero.iter().map(|t| t.weight).collect();
        weights.sort_by_key(|w| *w == SWeight::Product);
        assert_eq!(weights, vec![SWeight::Min, SWeight::Product]);
    }

    #[test]
    fn odd_total_is_empty() {
        assert!(enumerate_terms(1, 2).unwrap().is_empty());
        assert!(enumerate_terms(3, 4).unwrap().is_empty());
    }

    #[test]
    fn size_cap() {
        assert!(matches!(enumerate_terms(7, 7), Err(Error::SizeCap(_))));
        assert!(enumerate_terms(0, 2).is_err());
    }

    #[test]
    fn bracelet_factor_is_one() {
        let off = AtomSpec::two_point_m4(int(3)).unwrap();
        let mut found = 0;
        for t in enumerate_terms(3, 3).unwrap() {
            if t.class == GraphClass::Bracelet {
                let f = t.expectation_factor(&goe_diag(), &off).unwrap();
                if !f.is_zero() {
                    assert_eq!(f, int(1));
                    found += 1;
                }
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn unit_times_give_unit_weight() {
        for t in enumerate_terms(2, 4).unwrap() {
            assert_eq!(t.s_weight(&int(1), &int(1)), int(1));
        }
    }

    #[test]
    fn blocks_string_marks_second_path() {
        let set = IndexSetE::new(2, 2).unwrap();
        let t = PartitionTerm::from_labels(set, &[0, 1, 0, 1]);
        assert_eq!(t.blocks_string(), "{0,0'}{1,1'}");
        assert_eq!(t.weight, SWeight::Min);
    }

    #[test]
    fn complex_orientation_counts_conjugates() {
        // path 1: 0 → 1 → 0, path 2: 1 → 0 → 1 ; GUE tree factor E|x|⁴ − 1 = 1
        let set = IndexSetE::new(2, 2).unwrap();
        let t = PartitionTerm::from_labels(set, &[0, 1, 1, 0]);
        let e = &t.edges[0];
        assert_eq!((e.forward, e.backward), ([1, 1], [1, 1]));
        let f = t.expectation_factor(&AtomSpec::gauss_real(int(1)), &AtomSpec::gauss_complex(int(1))).unwrap();
        assert_eq!(f, int(1));
    }
}
