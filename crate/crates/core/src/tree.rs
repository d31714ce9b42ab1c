//! Labelled unrooted trivalent trees.
//!
//! Leaves carry the labels `1..=n` and live at vertex ids `0..n` (leaf `l` is
//! vertex `l - 1`). Trinodes occupy ids `n..2n-2`. Every tree is stored in a
//! canonical form: the trinode next to leaf 1 is the root, trinodes are
//! numbered in pre-order following the rotation, and each trinode lists its
//! neighbours starting with the one towards leaf 1. Two trees therefore
//! compare equal exactly when their labelled structure and rotations agree.

use std::fmt;

use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Leaf sets are bit masks, so the number of leaves is capped.
pub const MAX_LEAVES: usize = 32;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("internal vertex of degree {degree}; every internal vertex must be trivalent")]
    NotTrivalent { degree: usize },
    #[error("leaf label {0} appears more than once")]
    DuplicateLabel(usize),
    #[error("leaf labels must be exactly 1..={n}; label {label} is out of range")]
    LabelsNotContiguous { n: usize, label: usize },
    #[error("a trivalent tree needs at least 3 leaves, got {0}")]
    TooFewLeaves(usize),
    #[error("at most {MAX_LEAVES} leaves are supported, got {0}")]
    TooManyLeaves(usize),
    #[error("invalid tree structure: {0}")]
    Structure(String),
    #[error("leaf {0} is not part of the subtree")]
    LeafNotInSubtree(usize),
    #[error("leaf {0} does not exist")]
    UnknownLeaf(usize),
    #[error("a proper subtree needs at least two leaves")]
    SubtreeTooSmall,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    n: usize,
    adj: Vec<Vec<VertexId>>,
    edges: Vec<(VertexId, VertexId)>,
    /// Leaf mask on the child side of every edge.
    split: Vec<u64>,
    parent: Vec<Option<VertexId>>,
    depth: Vec<usize>,
}

/// The span of a set of at least two leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProperSubtree {
    leaves: u64,
    edges: u64,
}

impl ProperSubtree {
    pub fn leaf_mask(&self) -> u64 {
        self.leaves
    }

    /// Leaf labels in increasing order.
    pub fn leaf_set(&self) -> Vec<usize> {
        bits(self.leaves).map(|b| b + 1).collect()
    }

    pub fn contains_leaf(&self, label: usize) -> bool {
        (1..=64).contains(&label) && self.leaves >> (label - 1) & 1 == 1
    }

    pub fn edge_mask(&self) -> u64 {
        self.edges
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        bits(self.edges).collect()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges >> e & 1 == 1
    }

    pub fn min_leaf(&self) -> usize {
        self.leaves.trailing_zeros() as usize + 1
    }

    /// Degree of `v` inside the span.
    pub fn degree(&self, tree: &Tree, v: VertexId) -> usize {
        tree.incident_edges(v)
            .iter()
            .filter(|&&e| self.contains_edge(e))
            .count()
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |b| mask >> b & 1 == 1)
}

impl Tree {
    /// Builds a tree from raw adjacency lists. Vertices `0..n` must be the
    /// leaves labelled `1..=n`; every other vertex must have degree 3 and its
    /// list order is taken as the rotation.
    pub fn from_adjacency(n: usize, adj: Vec<Vec<VertexId>>) -> Result<Tree, TreeError> {
        if n < 3 {
            return Err(TreeError::TooFewLeaves(n));
        }
        if n > MAX_LEAVES {
            return Err(TreeError::TooManyLeaves(n));
        }
        let nv = adj.len();
        if nv != 2 * n - 2 {
            return Err(TreeError::Structure(format!(
                "expected {} vertices for {n} leaves, got {nv}",
                2 * n - 2
            )));
        }
        for (v, nbrs) in adj.iter().enumerate() {
            let want = if v < n { 1 } else { 3 };
            if v >= n && nbrs.len() != 3 {
                return Err(TreeError::NotTrivalent { degree: nbrs.len() });
            }
            if nbrs.len() != want {
                return Err(TreeError::Structure(format!(
                    "leaf {} has degree {}",
                    v + 1,
                    nbrs.len()
                )));
            }
            for &u in nbrs {
                if u >= nv || u == v || !adj[u].contains(&v) {
                    return Err(TreeError::Structure(format!("bad adjacency at vertex {v}")));
                }
            }
        }

        // Canonical pre-order numbering from the trinode next to leaf 1.
        let root = adj[0][0];
        if root < n {
            return Err(TreeError::Structure("two leaves adjacent".into()));
        }
        let mut new_id = vec![usize::MAX; nv];
        for (v, id) in new_id.iter_mut().enumerate().take(n) {
            *id = v;
        }
        let mut rotated: Vec<Vec<VertexId>> = vec![Vec::new(); nv];
        let mut order = Vec::with_capacity(n - 2);
        // (vertex, neighbour it was reached from)
        let mut stack = vec![(root, 0usize)];
        let mut seen = vec![false; nv];
        seen[0] = true;
        while let Some((v, from)) = stack.pop() {
            if seen[v] {
                return Err(TreeError::Structure("graph contains a cycle".into()));
            }
            seen[v] = true;
            if v < n {
                continue;
            }
            new_id[v] = n + order.len();
            order.push(v);
            let pos = adj[v].iter().position(|&u| u == from).unwrap();
            let rot: Vec<VertexId> = (0..3).map(|k| adj[v][(pos + k) % 3]).collect();
            // Push in reverse so the rotation order is visited first-to-last.
            stack.push((rot[2], v));
            stack.push((rot[1], v));
            rotated[v] = rot;
        }
        if seen.iter().any(|s| !s) {
            return Err(TreeError::Structure("graph is not connected".into()));
        }

        let mut canon: Vec<Vec<VertexId>> = vec![Vec::new(); nv];
        for v in 0..n {
            canon[v] = vec![new_id[adj[v][0]]];
        }
        for &v in &order {
            canon[new_id[v]] = rotated[v].iter().map(|&u| new_id[u]).collect();
        }
        Ok(Tree::from_canonical(n, canon))
    }

    fn from_canonical(n: usize, adj: Vec<Vec<VertexId>>) -> Tree {
        let nv = adj.len();
        let root = n;
        let mut parent = vec![None; nv];
        let mut depth = vec![0; nv];
        for v in 0..n {
            parent[v] = Some(adj[v][0]);
        }
        for t in n + 1..nv {
            parent[t] = Some(adj[t][0]);
        }
        // Trinodes are numbered in pre-order, so parents come first.
        for t in n + 1..nv {
            depth[t] = depth[parent[t].unwrap()] + 1;
        }
        for v in 0..n {
            depth[v] = depth[adj[v][0]] + 1;
        }
        debug_assert_eq!(adj[root][0], 0);

        let mut edges = Vec::with_capacity(2 * n - 3);
        for v in 0..n {
            edges.push((v, adj[v][0]));
        }
        for t in n + 1..nv {
            edges.push((t, adj[t][0]));
        }
        let mut below = vec![0u64; nv];
        for v in 0..n {
            below[v] = 1 << v;
        }
        for t in (n + 1..nv).rev() {
            let mask: u64 = adj[t][1..].iter().map(|&c| below[c]).fold(0, |a, b| a | b);
            below[t] = mask;
        }
        let split = edges.iter().map(|&(child, _)| below[child]).collect();
        Tree {
            n,
            adj,
            edges,
            split,
            parent,
            depth,
        }
    }

    /// Parses the parenthesised tree format, e.g. `(1,2,(3,4))` or
    /// `((1,2),(3,4))`.
    pub fn parse(text: &str) -> Result<Tree, TreeError> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        p.skip_ws();
        let expr = p.node()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        let children = match expr {
            Expr::Leaf(_) => return Err(TreeError::TooFewLeaves(1)),
            Expr::Group(c) => c,
        };

        let mut labels = Vec::new();
        for c in &children {
            c.collect_labels(&mut labels);
        }
        let n = labels.len();
        let mut seen = vec![false; n + 1];
        for &l in &labels {
            if l >= 1 && l <= n && seen[l] {
                return Err(TreeError::DuplicateLabel(l));
            }
            if l >= 1 && l <= n {
                seen[l] = true;
            }
        }
        if let Some(&l) = labels.iter().find(|&&l| l == 0 || l > n) {
            if labels.iter().filter(|&&x| x == l).count() > 1 {
                return Err(TreeError::DuplicateLabel(l));
            }
            return Err(TreeError::LabelsNotContiguous { n, label: l });
        }
        if n < 3 {
            return Err(TreeError::TooFewLeaves(n));
        }
        if n > MAX_LEAVES {
            return Err(TreeError::TooManyLeaves(n));
        }

        let mut b = Builder {
            adj: vec![Vec::new(); n],
        };
        match children.len() {
            3 => {
                let root = b.new_vertex();
                for c in &children {
                    let id = b.build(c, root)?;
                    b.adj[root].push(id);
                }
            }
            2 => {
                // A root with two children is suppressed: its children are
                // joined by a single edge.
                let a = b.build(&children[0], usize::MAX)?;
                let c = b.build(&children[1], usize::MAX)?;
                b.set_parent(a, c);
                b.set_parent(c, a);
            }
            k => return Err(TreeError::NotTrivalent { degree: k }),
        }
        Tree::from_adjacency(n, b.adj)
    }

    /// The caterpillar: trinodes `t_1..t_{n-2}` on a path, `t_1` holding
    /// leaves 1 and 2, `t_i` holding leaf `i+1`, and `t_{n-2}` holding leaves
    /// `n-1` and `n`.
    pub fn caterpillar(n: usize) -> Result<Tree, TreeError> {
        if n < 3 {
            return Err(TreeError::TooFewLeaves(n));
        }
        if n > MAX_LEAVES {
            return Err(TreeError::TooManyLeaves(n));
        }
        let t = |i: usize| n + i - 1; // t_i for i in 1..=n-2
        let mut adj = vec![Vec::new(); 2 * n - 2];
        if n == 3 {
            adj[t(1)] = vec![0, 1, 2];
        } else {
            adj[t(1)] = vec![0, 1, t(2)];
            for i in 2..n - 2 {
                adj[t(i)] = vec![t(i - 1), i, t(i + 1)];
            }
            adj[t(n - 2)] = vec![t(n - 3), n - 2, n - 1];
        }
        for i in 1..=n - 2 {
            for k in 0..3 {
                let u = adj[t(i)][k];
                if u < n {
                    adj[u] = vec![t(i)];
                }
            }
        }
        Tree::from_adjacency(n, adj)
    }

    /// Every labelled trivalent tree on `n` leaves, built by inserting leaf
    /// `k` into each edge of every tree on `k-1` leaves. There are
    /// `(2n-5)!!` of them.
    pub fn all_labelled(n: usize) -> Result<Vec<Tree>, TreeError> {
        if n < 3 {
            return Err(TreeError::TooFewLeaves(n));
        }
        let mut trees = vec![Tree::parse("(1,2,3)")?];
        for _ in 4..=n {
            let mut next = Vec::new();
            for t in &trees {
                for e in 0..t.edges.len() {
                    next.push(t.insert_leaf(e)?);
                }
            }
            trees = next;
        }
        Ok(trees)
    }

    fn insert_leaf(&self, e: EdgeId) -> Result<Tree, TreeError> {
        let n = self.n;
        let shift = |v: VertexId| if v < n { v } else { v + 1 };
        let nv = self.adj.len() + 2;
        let leaf = n;
        let mid = nv - 1;
        let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); nv];
        for (v, nbrs) in self.adj.iter().enumerate() {
            adj[shift(v)] = nbrs.iter().map(|&u| shift(u)).collect();
        }
        let (a, b) = self.edges[e];
        let (a, b) = (shift(a), shift(b));
        for x in adj[a].iter_mut() {
            if *x == b {
                *x = mid;
            }
        }
        for x in adj[b].iter_mut() {
            if *x == a {
                *x = mid;
            }
        }
        adj[mid] = vec![a, leaf, b];
        adj[leaf] = vec![mid];
        Tree::from_adjacency(n + 1, adj)
    }

    pub fn leaf_count(&self) -> usize {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        v < self.n
    }

    pub fn trinodes(&self) -> std::ops::Range<VertexId> {
        self.n..self.adj.len()
    }

    pub fn leaf_vertex(&self, label: usize) -> Result<VertexId, TreeError> {
        if label == 0 || label > self.n {
            return Err(TreeError::UnknownLeaf(label));
        }
        Ok(label - 1)
    }

    /// Neighbours in rotation order, starting towards leaf 1.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn is_internal_edge(&self, e: EdgeId) -> bool {
        e >= self.n
    }

    pub fn internal_edges(&self) -> std::ops::Range<EdgeId> {
        self.n..self.edges.len()
    }

    /// Id of the edge joining `u` and `v`, if they are adjacent.
    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let edge_of = |child: VertexId| if child < self.n { child } else { child - 1 };
        if self.parent[u] == Some(v) {
            Some(edge_of(u))
        } else if self.parent[v] == Some(u) {
            Some(edge_of(v))
        } else {
            None
        }
    }

    /// Incident edges of `v` in rotation order.
    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.adj[v]
            .iter()
            .map(|&u| self.edge_between(v, u).expect("adjacent"))
            .collect()
    }

    /// Leaf mask on one side of `e` (the side away from leaf 1, except for
    /// the edge of leaf 1 itself).
    pub fn split(&self, e: EdgeId) -> u64 {
        self.split[e]
    }

    pub fn all_leaves_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Vertices reachable from `from` without crossing `e`.
    pub fn component_without_edge(&self, e: EdgeId, from: VertexId) -> Vec<VertexId> {
        let (a, b) = self.edges[e];
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![from];
        seen[from] = true;
        let mut out = Vec::new();
        while let Some(v) = stack.pop() {
            out.push(v);
            for &u in &self.adj[v] {
                if (v == a && u == b) || (v == b && u == a) || seen[u] {
                    continue;
                }
                seen[u] = true;
                stack.push(u);
            }
        }
        out.sort_unstable();
        out
    }

    /// Vertices on the path between `u` and `v`, inclusive, in order.
    pub fn path(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        let up = |x: VertexId| self.parent[x].expect("root has no parent");
        let (mut a, mut b) = (u, v);
        let mut left = Vec::new();
        let mut right = Vec::new();
        while self.depth[a] > self.depth[b] {
            left.push(a);
            a = up(a);
        }
        while self.depth[b] > self.depth[a] {
            right.push(b);
            b = up(b);
        }
        while a != b {
            left.push(a);
            right.push(b);
            a = up(a);
            b = up(b);
        }
        left.push(a);
        left.extend(right.into_iter().rev());
        left
    }

    /// The span of the leaf set `labels`.
    pub fn proper_subtree(&self, labels: &[usize]) -> Result<ProperSubtree, TreeError> {
        let mut mask = 0u64;
        for &l in labels {
            self.leaf_vertex(l)?;
            mask |= 1 << (l - 1);
        }
        self.subtree_from_mask(mask)
    }

    pub fn subtree_from_mask(&self, leaves: u64) -> Result<ProperSubtree, TreeError> {
        if leaves & !self.all_leaves_mask() != 0 {
            return Err(TreeError::UnknownLeaf(64 - leaves.leading_zeros() as usize));
        }
        if leaves.count_ones() < 2 {
            return Err(TreeError::SubtreeTooSmall);
        }
        let mut edges = 0u64;
        for (e, &side) in self.split.iter().enumerate() {
            if leaves & side != 0 && leaves & !side != 0 {
                edges |= 1 << e;
            }
        }
        Ok(ProperSubtree { leaves, edges })
    }

    /// All proper subtrees, ordered by leaf-set size and then
    /// lexicographically.
    pub fn proper_subtrees(&self) -> Vec<ProperSubtree> {
        let mut sets: Vec<Vec<usize>> = (1u64..=self.all_leaves_mask())
            .filter(|m| m.count_ones() >= 2)
            .map(|m| bits(m).map(|b| b + 1).collect())
            .collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        sets.iter()
            .map(|s| self.proper_subtree(s).expect("valid leaf set"))
            .collect()
    }

    /// Number of vertices of span-degree 3 on the path between two leaves of
    /// the subtree.
    pub fn path_trinode_count(
        &self,
        s: &ProperSubtree,
        l1: usize,
        l2: usize,
    ) -> Result<usize, TreeError> {
        for l in [l1, l2] {
            self.leaf_vertex(l)?;
            if !s.contains_leaf(l) {
                return Err(TreeError::LeafNotInSubtree(l));
            }
        }
        Ok(self
            .path(l1 - 1, l2 - 1)
            .into_iter()
            .filter(|&v| s.degree(self, v) == 3)
            .count())
    }

    /// True when every leaf-to-leaf path in the span meets an odd number of
    /// span trinodes.
    pub fn is_odd_subtree(&self, s: &ProperSubtree) -> bool {
        let leaves = s.leaf_set();
        leaves.iter().enumerate().all(|(i, &a)| {
            leaves[i + 1..]
                .iter()
                .all(|&b| self.path_trinode_count(s, a, b).unwrap() % 2 == 1)
        })
    }

    /// Text form accepted by [`Tree::parse`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        let root = self.n;
        out.push('(');
        for (k, &c) in self.adj[root].iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            self.render_into(c, &mut out);
        }
        out.push(')');
        out
    }

    fn render_into(&self, v: VertexId, out: &mut String) {
        if v < self.n {
            out.push_str(&(v + 1).to_string());
            return;
        }
        out.push('(');
        self.render_into(self.adj[v][1], out);
        out.push(',');
        self.render_into(self.adj[v][2], out);
        out.push(')');
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::str::FromStr for Tree {
    type Err = TreeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tree::parse(s)
    }
}

enum Expr {
    Leaf(usize),
    Group(Vec<Expr>),
}

impl Expr {
    fn collect_labels(&self, out: &mut Vec<usize>) {
        match self {
            Expr::Leaf(l) => out.push(*l),
            Expr::Group(c) => c.iter().for_each(|e| e.collect_labels(out)),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> TreeError {
        TreeError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn node(&mut self) -> Result<Expr, TreeError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                let mut children = vec![self.node()?];
                loop {
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        Some(b',') => {
                            self.pos += 1;
                            children.push(self.node()?);
                        }
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(Expr::Group(children));
                        }
                        Some(_) => return Err(self.err("expected ',' or ')'")),
                        None => return Err(self.err("unbalanced parenthesis")),
                    }
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                s.parse()
                    .map(Expr::Leaf)
                    .map_err(|_| self.err("leaf label out of range"))
            }
            Some(_) => Err(self.err("expected '(' or a leaf label")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

struct Builder {
    adj: Vec<Vec<VertexId>>,
}

impl Builder {
    fn new_vertex(&mut self) -> VertexId {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    fn set_parent(&mut self, v: VertexId, p: VertexId) {
        if self.adj[v].is_empty() {
            self.adj[v].push(p);
        } else {
            self.adj[v][0] = p;
        }
    }

    fn build(&mut self, e: &Expr, parent: VertexId) -> Result<VertexId, TreeError> {
        match e {
            Expr::Leaf(l) => {
                let v = l - 1;
                self.adj[v] = vec![parent];
                Ok(v)
            }
            Expr::Group(children) => {
                if children.len() != 2 {
                    return Err(TreeError::NotTrivalent {
                        degree: children.len() + 1,
                    });
                }
                let v = self.new_vertex();
                self.adj[v].push(parent);
                for c in children {
                    let id = self.build(c, v)?;
                    self.adj[v].push(id);
                }
                Ok(v)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_small_trees() {
        let t = Tree::parse("((1,2),(3,4))").unwrap();
        assert_eq!(t.leaf_count(), 4);
        assert_eq!(t.trinodes().len(), 2);
        assert_eq!(t.num_edges(), 5);

        let t = Tree::parse("(1,2,3)").unwrap();
        assert_eq!(t.trinodes().len(), 1);
        assert_eq!(t.num_edges(), 3);
    }

    #[test]
    fn parse_errors_are_distinct() {
        assert_eq!(
            Tree::parse("((1,2),3,4,5)"),
            Err(TreeError::NotTrivalent { degree: 4 })
        );
        assert_eq!(
            Tree::parse("(1,(2,3,4),5)"),
            Err(TreeError::NotTrivalent { degree: 4 })
        );
        assert_eq!(
            Tree::parse("((1),2,3)"),
            Err(TreeError::NotTrivalent { degree: 2 })
        );
        assert_eq!(Tree::parse("(1,2,2)"), Err(TreeError::DuplicateLabel(2)));
        assert_eq!(
            Tree::parse("(1,2,5)"),
            Err(TreeError::LabelsNotContiguous { n: 3, label: 5 })
        );
        assert!(matches!(Tree::parse("(1,2,3"), Err(TreeError::Syntax { .. })));
        assert!(matches!(Tree::parse("(1,,3)"), Err(TreeError::Syntax { .. })));
        assert!(matches!(Tree::parse("(1,2,3)x"), Err(TreeError::Syntax { .. })));
        assert_eq!(Tree::parse("(1,2)"), Err(TreeError::TooFewLeaves(2)));
    }

    #[test]
    fn caterpillars_match_parsed_trees() {
        assert_eq!(Tree::caterpillar(3).unwrap(), Tree::parse("(1,2,3)").unwrap());
        assert_eq!(
            Tree::caterpillar(4).unwrap(),
            Tree::parse("((1,2),(3,4))").unwrap()
        );
        assert_eq!(Tree::caterpillar(5).unwrap().render(), "(1,2,(3,(4,5)))");
        assert!(Tree::caterpillar(2).is_err());
    }

    #[test]
    fn caterpillar_trinodes_touch_leaves() {
        let t = Tree::caterpillar(6).unwrap();
        assert_eq!(t.trinodes().len(), 4);
        for v in t.trinodes() {
            assert!(t.neighbors(v).iter().any(|&u| t.is_leaf(u)));
        }
    }

    #[test]
    fn proper_subtree_counts() {
        let t = Tree::parse("(1,2,3)").unwrap();
        let subs = t.proper_subtrees();
        let sets: Vec<_> = subs.iter().map(|s| s.leaf_set()).collect();
        assert_eq!(sets, vec![vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 2, 3]]);
        assert_eq!(Tree::caterpillar(4).unwrap().proper_subtrees().len(), 11);
        assert_eq!(Tree::caterpillar(5).unwrap().proper_subtrees().len(), 26);
    }

    #[test]
    fn path_trinode_counts() {
        let t = Tree::caterpillar(4).unwrap();
        let s = t.proper_subtree(&[1, 2, 3]).unwrap();
        assert_eq!(t.path_trinode_count(&s, 1, 3).unwrap(), 1);
        let s = t.proper_subtree(&[1, 2, 3, 4]).unwrap();
        assert_eq!(t.path_trinode_count(&s, 1, 4).unwrap(), 2);
        let t = Tree::caterpillar(6).unwrap();
        let s = t.proper_subtree(&[1, 3, 6]).unwrap();
        assert_eq!(t.path_trinode_count(&s, 1, 6).unwrap(), 1);
        assert_eq!(
            t.path_trinode_count(&s, 1, 2),
            Err(TreeError::LeafNotInSubtree(2))
        );
    }

    #[test]
    fn odd_subtrees() {
        let t = Tree::caterpillar(5).unwrap();
        for s in t.proper_subtrees() {
            assert_eq!(t.is_odd_subtree(&s), s.leaf_set().len() == 3, "{:?}", s.leaf_set());
        }
        let t = Tree::caterpillar(4).unwrap();
        assert!(!t.is_odd_subtree(&t.proper_subtree(&[1, 2, 3, 4]).unwrap()));
        let t = Tree::parse("((1,2),(3,4),(5,6))").unwrap();
        assert!(!t.is_odd_subtree(&t.proper_subtree(&[2, 5]).unwrap()));
    }

    #[test]
    fn labelled_tree_counts() {
        assert_eq!(Tree::all_labelled(4).unwrap().len(), 3);
        assert_eq!(Tree::all_labelled(5).unwrap().len(), 15);
        assert_eq!(Tree::all_labelled(6).unwrap().len(), 105);
    }

    #[test]
    fn span_of_union_contains_spans() {
        let t = Tree::parse("((1,2),(3,4),(5,6))").unwrap();
        let full = t.all_leaves_mask();
        for a in 1..=full {
            for b in 1..=full {
                if a.count_ones() < 2 || b.count_ones() < 2 {
                    continue;
                }
                let sa = t.subtree_from_mask(a).unwrap();
                let sb = t.subtree_from_mask(b).unwrap();
                let su = t.subtree_from_mask(a | b).unwrap();
                assert_eq!(su.edge_mask() & sa.edge_mask(), sa.edge_mask());
                assert_eq!(su.edge_mask() & sb.edge_mask(), sb.edge_mask());
            }
        }
    }

    #[test]
    fn span_leaves_are_tree_leaves() {
        for t in Tree::all_labelled(5).unwrap() {
            for s in t.proper_subtrees() {
                for v in 0..t.num_vertices() {
                    if s.degree(&t, v) == 1 {
                        assert!(t.is_leaf(v) && s.contains_leaf(v + 1));
                    }
                    if !t.is_leaf(v) {
                        assert_ne!(s.degree(&t, v), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn render_round_trips() {
        for n in 3..=6 {
            for t in Tree::all_labelled(n).unwrap() {
                assert_eq!(Tree::parse(&t.render()).unwrap(), t);
            }
        }
        for n in 3..=12 {
            let t = Tree::caterpillar(n).unwrap();
            assert_eq!(Tree::parse(&t.render()).unwrap(), t);
        }
    }

    #[test]
    fn structural_invariants() {
        for t in Tree::all_labelled(6).unwrap() {
            assert_eq!(t.trinodes().len(), 4);
            assert_eq!(t.num_edges(), 9);
            for v in 0..t.num_vertices() {
                assert_eq!(t.neighbors(v).len(), if t.is_leaf(v) { 1 } else { 3 });
                assert_eq!(t.incident_edges(v).len(), t.neighbors(v).len());
            }
        }
    }
}
