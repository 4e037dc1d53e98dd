//! Parse trees of maximal joinless codes and the initial factor DAG.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::code::CodeSet;
use crate::error::{NvError, Result};
use crate::ntuple::{NTuple, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseMode {
    /// Repeatedly collapse the first available sibling family.
    Greedy,
    /// Complete search over all split choices.
    Exhaustive,
}

/// A tree whose interior vertices split into k children along one axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTree {
    sig: Signature,
    splits: BTreeMap<NTuple, usize>,
    leaves: CodeSet,
}

impl ParseTree {
    /// Rebuilds a tree from its interior vertices and split axes.
    pub fn from_splits(sig: Signature, splits: BTreeMap<NTuple, usize>) -> Result<Self> {
        let mut t = ParseTree { sig, splits, leaves: CodeSet::root(sig) };
        let seq = t.restriction_sequence();
        if seq.len() != t.splits.len() {
            return Err(NvError::Parse("parse tree has unreachable interior vertices".into()));
        }
        t.leaves = CodeSet::root(sig).apply_restrictions(&seq)?;
        Ok(t)
    }

    pub fn root(&self) -> NTuple {
        NTuple::root(self.sig)
    }

    pub fn leaves(&self) -> &CodeSet {
        &self.leaves
    }

    /// Interior vertices with their split axis.
    pub fn splits(&self) -> &BTreeMap<NTuple, usize> {
        &self.splits
    }

    pub fn split_axis(&self, v: &NTuple) -> Option<usize> {
        self.splits.get(v).copied()
    }

    pub fn vertices(&self) -> BTreeSet<NTuple> {
        let mut out: BTreeSet<NTuple> = self.splits.keys().cloned().collect();
        out.extend(self.leaves.iter().cloned());
        out
    }

    pub fn edges(&self) -> Vec<(NTuple, NTuple)> {
        self.splits
            .iter()
            .flat_map(|(v, &axis)| v.children(axis).map(move |c| (v.clone(), c)))
            .collect()
    }

    /// Restriction steps in breadth-first order from the root.
    pub fn restriction_sequence(&self) -> Vec<(NTuple, usize)> {
        let mut out = Vec::new();
        let mut queue = std::collections::VecDeque::from([self.root()]);
        while let Some(v) = queue.pop_front() {
            if let Some(axis) = self.split_axis(&v) {
                queue.extend(v.children(axis));
                out.push((v, axis));
            }
        }
        out
    }

    /// Checks that every vertex is reachable, every split has k children,
    /// and that replaying the splits from the root reproduces the leaves.
    pub fn is_sound(&self) -> bool {
        let seq = self.restriction_sequence();
        if seq.len() != self.splits.len() {
            return false;
        }
        match CodeSet::root(self.sig).apply_restrictions(&seq) {
            Ok(code) => code == self.leaves,
            Err(_) => false,
        }
    }
}

impl CodeSet {
    /// A parse tree of the code, if one is found by the chosen mode.
    pub fn parse_tree(&self, mode: ParseMode) -> Result<Option<ParseTree>> {
        if !self.is_joinless() {
            return Err(NvError::NotJoinless);
        }
        if self.is_empty() {
            return Ok(None);
        }
        Ok(match mode {
            ParseMode::Greedy => greedy(self),
            ParseMode::Exhaustive => Search::new(self).first_tree(),
        })
    }

    /// The number of distinct parse trees with leaf set equal to this code.
    pub fn count_parse_trees(&self) -> Result<BigUint> {
        if !self.is_joinless() {
            return Err(NvError::NotJoinless);
        }
        if self.is_empty() {
            return Ok(BigUint::zero());
        }
        let mut s = Search::new(self);
        Ok(s.count(&NTuple::root(self.sig())))
    }

    /// All parse trees, up to `limit`.
    pub fn all_parse_trees(&self, limit: usize) -> Result<Vec<ParseTree>> {
        if !self.is_joinless() {
            return Err(NvError::NotJoinless);
        }
        if self.is_empty() {
            return Ok(Vec::new());
        }
        let mut s = Search::new(self);
        let root = NTuple::root(self.sig());
        let forests = s.enumerate(&root, limit);
        Ok(forests
            .into_iter()
            .map(|splits| ParseTree { sig: self.sig(), splits, leaves: self.clone() })
            .collect())
    }
}

fn greedy(code: &CodeSet) -> Option<ParseTree> {
    let sig = code.sig();
    let mut work: BTreeSet<NTuple> = code.iter().cloned().collect();
    let mut splits = BTreeMap::new();

    let valid = |work: &BTreeSet<NTuple>, v: &NTuple, axis: usize| {
        let mut ch = v.children(axis);
        ch.all(|c| work.contains(&c))
    };
    let mut candidates: BTreeSet<(NTuple, usize)> = BTreeSet::new();
    for x in work.iter() {
        for axis in 1..=sig.n() {
            if let Some(v) = x.parent(axis) {
                if valid(&work, &v, axis) {
                    candidates.insert((v, axis));
                }
            }
        }
    }

    while let Some((v, axis)) = candidates.pop_first() {
        let children: Vec<NTuple> = v.children(axis).collect();
        for c in &children {
            work.remove(c);
            for j in 1..=sig.n() {
                if let Some(u) = c.parent(j) {
                    candidates.remove(&(u, j));
                }
            }
        }
        for j in 1..=sig.n() {
            if let Some(u) = v.parent(j) {
                candidates.remove(&(u.clone(), j));
            }
        }
        work.insert(v.clone());
        for j in 1..=sig.n() {
            if let Some(u) = v.parent(j) {
                if valid(&work, &u, j) {
                    candidates.insert((u, j));
                }
            }
        }
        splits.insert(v, axis);
    }

    (work.len() == 1 && work.contains(&NTuple::root(sig))).then(|| ParseTree {
        sig,
        splits,
        leaves: code.clone(),
    })
}

/// Top-down search memoized by vertex. A subtree rooted at `v` exists iff
/// `v` is a code element, or `v` is a proper initial factor of some element
/// and some axis splits it into children that all have subtrees.
struct Search<'a> {
    code: &'a CodeSet,
    factors: BTreeSet<NTuple>,
    counts: HashMap<NTuple, BigUint>,
}

impl<'a> Search<'a> {
    fn new(code: &'a CodeSet) -> Self {
        let factors = code.iter().flat_map(|x| x.initial_factors()).collect();
        Self { code, factors, counts: HashMap::new() }
    }

    fn count(&mut self, v: &NTuple) -> BigUint {
        if let Some(c) = self.counts.get(v) {
            return c.clone();
        }
        let total = if self.code.contains(v) {
            BigUint::one()
        } else if !self.factors.contains(v) {
            BigUint::zero()
        } else {
            let mut total = BigUint::zero();
            for axis in 1..=self.code.sig().n() {
                let mut prod = BigUint::one();
                for c in v.children(axis) {
                    prod *= self.count(&c);
                    if prod.is_zero() {
                        break;
                    }
                }
                total += prod;
            }
            total
        };
        self.counts.insert(v.clone(), total.clone());
        total
    }

    fn first_tree(mut self) -> Option<ParseTree> {
        let root = NTuple::root(self.code.sig());
        if self.count(&root).is_zero() {
            return None;
        }
        let mut splits = BTreeMap::new();
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            if self.code.contains(&v) {
                continue;
            }
            let axis = (1..=self.code.sig().n())
                .find(|&axis| v.children(axis).all(|c| !self.count(&c).is_zero()))
                .expect("counted subtree");
            stack.extend(v.children(axis));
            splits.insert(v, axis);
        }
        Some(ParseTree { sig: self.code.sig(), splits, leaves: self.code.clone() })
    }

    fn enumerate(&mut self, v: &NTuple, limit: usize) -> Vec<BTreeMap<NTuple, usize>> {
        if limit == 0 || self.count(v).is_zero() {
            return Vec::new();
        }
        if self.code.contains(v) {
            return vec![BTreeMap::new()];
        }
        let mut out = Vec::new();
        for axis in 1..=self.code.sig().n() {
            let children: Vec<NTuple> = v.children(axis).collect();
            let mut partial = vec![BTreeMap::from([(v.clone(), axis)])];
            for c in &children {
                let subs = self.enumerate(c, limit);
                let mut next = Vec::new();
                'outer: for p in &partial {
                    for s in &subs {
                        let mut m = p.clone();
                        m.extend(s.iter().map(|(a, b)| (a.clone(), *b)));
                        next.push(m);
                        if next.len() >= limit {
                            break 'outer;
                        }
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            out.extend(partial);
            if out.len() >= limit {
                out.truncate(limit);
                break;
            }
        }
        out
    }
}

/// The initial factor DAG of a finite set of tuples.
#[derive(Debug, Clone)]
pub struct PDag {
    code: CodeSet,
    vertices: BTreeSet<NTuple>,
}

impl PDag {
    pub fn new(code: &CodeSet) -> Self {
        let vertices = code.iter().flat_map(|x| x.initial_factors()).collect();
        Self { code: code.clone(), vertices }
    }

    pub fn vertices(&self) -> &BTreeSet<NTuple> {
        &self.vertices
    }

    pub fn children(&self, v: &NTuple) -> Vec<NTuple> {
        (1..=v.sig().n())
            .flat_map(|axis| v.children(axis))
            .filter(|c| self.vertices.contains(c))
            .collect()
    }

    pub fn edges(&self) -> Vec<(NTuple, NTuple)> {
        self.vertices
            .iter()
            .flat_map(|v| self.children(v).into_iter().map(move |c| (v.clone(), c)))
            .collect()
    }

    /// Vertices of out-degree zero.
    pub fn leaves(&self) -> BTreeSet<NTuple> {
        self.vertices.iter().filter(|v| self.children(v).is_empty()).cloned().collect()
    }

    pub fn is_interior(&self, v: &NTuple) -> bool {
        self.vertices.contains(v) && !self.children(v).is_empty()
    }

    /// Interior vertices none of whose children are interior.
    pub fn interior_leaves(&self) -> Vec<NTuple> {
        self.vertices
            .iter()
            .filter(|v| self.is_interior(v))
            .filter(|v| self.children(v).iter().all(|c| !self.is_interior(c)))
            .cloned()
            .collect()
    }

    /// Children of `v` that belong to the code.
    pub fn children_in_code(&self, v: &NTuple) -> Vec<NTuple> {
        self.children(v).into_iter().filter(|c| self.code.contains(c)).collect()
    }

    /// Distance from the root, equal to the total coordinate length.
    pub fn depth(v: &NTuple) -> usize {
        v.depth()
    }
}

impl CodeSet {
    pub fn p_dag(&self) -> PDag {
        PDag::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv() -> CodeSet {
        CodeSet::from_strs(
            Signature::binary(3),
            &[&["0", "0", ""], &["1", "", "0"], &["", "1", "1"], &["0", "1", "0"], &["1", "0", "1"]],
        )
        .unwrap()
    }

    fn uniform22() -> CodeSet {
        CodeSet::uniform(Signature::binary(2), &[1, 1]).unwrap()
    }

    #[test]
    fn uniform_code_has_two_trees() {
        let u = uniform22();
        assert_eq!(u.count_parse_trees().unwrap(), BigUint::from(2u32));
        let trees = u.all_parse_trees(10).unwrap();
        assert_eq!(trees.len(), 2);
        assert_ne!(trees[0], trees[1]);
        assert!(trees.iter().all(ParseTree::is_sound));
        let axes: BTreeSet<usize> = trees.iter().map(|t| t.split_axis(&t.root()).unwrap()).collect();
        assert_eq!(axes, BTreeSet::from([1, 2]));
        let g = u.parse_tree(ParseMode::Greedy).unwrap().unwrap();
        assert!(g.is_sound());
        assert_eq!(g.edges().len(), 6);
    }

    #[test]
    fn root_code_tree() {
        let r = CodeSet::root(Signature::binary(2));
        let t = r.parse_tree(ParseMode::Greedy).unwrap().unwrap();
        assert!(t.splits().is_empty());
        assert_eq!(t.vertices().len(), 1);
        assert!(r.parse_tree(ParseMode::Exhaustive).unwrap().is_some());
    }

    #[test]
    fn lawson_vdovina_has_no_tree() {
        let p = lv();
        assert!(p.is_maximal_joinless().unwrap());
        assert!(p.parse_tree(ParseMode::Exhaustive).unwrap().is_none());
        assert!(p.parse_tree(ParseMode::Greedy).unwrap().is_none());
        assert!(p.count_parse_trees().unwrap().is_zero());
        let dag = p.p_dag();
        for v in dag.interior_leaves() {
            assert!(dag.children_in_code(&v).len() < 2, "{v}");
        }
    }

    #[test]
    fn non_maximal_has_no_tree() {
        let p = CodeSet::from_strs(Signature::binary(2), &[&["0", "0"]]).unwrap();
        assert!(p.parse_tree(ParseMode::Greedy).unwrap().is_none());
        assert!(p.parse_tree(ParseMode::Exhaustive).unwrap().is_none());
        let bad = CodeSet::from_strs(Signature::binary(2), &[&["", "0"], &["0", ""]]).unwrap();
        assert_eq!(bad.parse_tree(ParseMode::Greedy), Err(NvError::NotJoinless));
    }

    #[test]
    fn interior_leaf_example() {
        let p = CodeSet::from_strs(Signature::binary(2), &[&["0", "0"], &["0", "1"], &["1", ""]])
            .unwrap();
        let dag = p.p_dag();
        let leaves = dag.interior_leaves();
        let e0 = NTuple::from_strs(p.sig(), &["", "0"]).unwrap();
        let zero_e = NTuple::from_strs(p.sig(), &["0", ""]).unwrap();
        assert!(leaves.contains(&e0) && leaves.contains(&zero_e));
        assert_eq!(dag.children_in_code(&e0).len(), 1);
        assert_eq!(dag.children_in_code(&zero_e).len(), 2);
    }

    #[test]
    fn p_dag_vertices() {
        let sig = Signature::binary(2);
        assert_eq!(CodeSet::root(sig).p_dag().vertices().len(), 1);
        let p = CodeSet::from_strs(sig, &[&["0", "0"]]).unwrap();
        let dag = p.p_dag();
        assert_eq!(dag.vertices().len(), 4);
        assert_eq!(dag.edges().len(), 4);
        let u = uniform22();
        assert_eq!(u.p_dag().leaves(), u.iter().cloned().collect());
    }
}
