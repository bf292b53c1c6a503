//! Labeled trees presenting GBS tree groups.
//!
//! A tree with vertex set `V` and edges `(u, v, m, n)` presents the group
//! generated by `x_v` (`v in V`) subject to `x_u^m = x_v^n` for every edge.
//! The `.gbs` text format is line oriented:
//!
//! ```text
//! # comment
//! vertex a
//! vertex b
//! edge a b 42 30
//! ```
//!
//! Vertices must be declared before they are used; the first declared vertex
//! is the root used by every traversal.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::words::GroupWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub label_u: BigInt,
    pub label_v: BigInt,
}

impl Edge {
    /// Label carried at endpoint `w`.
    pub fn label_at(&self, w: VertexId) -> &BigInt {
        if w == self.u {
            &self.label_u
        } else {
            debug_assert_eq!(w, self.v);
            &self.label_v
        }
    }

    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("edge labels must be nonzero")]
    ZeroLabel,
    #[error("not a tree: self-loop at `{0}`")]
    SelfLoop(String),
    #[error("not a tree: edge {0} -- {1} closes a cycle")]
    Cycle(String, String),
    #[error("not a tree: {0} connected components")]
    Disconnected(usize),
    #[error("no vertices declared")]
    Empty,
    #[error("labels must be positive; normalize signs first")]
    NotNormalized,
    #[error("source and target vertex coincide (`{0}`)")]
    SameVertex(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

/// A validated labeled tree. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    names: Vec<String>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    parent: Vec<Option<(VertexId, EdgeId)>>,
    depth: Vec<usize>,
    bfs: Vec<VertexId>,
}

#[derive(Debug, Default)]
pub struct TreeBuilder {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    // union-find over vertices for cycle detection
    uf: Vec<usize>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: &str) -> Result<VertexId, TreeError> {
        if self.index.contains_key(name) {
            return Err(TreeError::DuplicateVertex(name.to_string()));
        }
        let id = VertexId(self.names.len());
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        self.uf.push(id.0);
        Ok(id)
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.uf[x] != x {
            self.uf[x] = self.uf[self.uf[x]];
            x = self.uf[x];
        }
        x
    }

    pub fn edge(
        &mut self,
        u: &str,
        v: &str,
        label_u: impl Into<BigInt>,
        label_v: impl Into<BigInt>,
    ) -> Result<EdgeId, TreeError> {
        let (label_u, label_v) = (label_u.into(), label_v.into());
        let lookup = |name: &str| {
            self.index
                .get(name)
                .copied()
                .ok_or_else(|| TreeError::UnknownVertex(name.to_string()))
        };
        let (iu, iv) = (lookup(u)?, lookup(v)?);
        if label_u.is_zero() || label_v.is_zero() {
            return Err(TreeError::ZeroLabel);
        }
        if iu == iv {
            return Err(TreeError::SelfLoop(u.to_string()));
        }
        let (ru, rv) = (self.find(iu.0), self.find(iv.0));
        if ru == rv {
            return Err(TreeError::Cycle(u.to_string(), v.to_string()));
        }
        self.uf[ru] = rv;
        self.edges.push(Edge { u: iu, v: iv, label_u, label_v });
        Ok(EdgeId(self.edges.len() - 1))
    }

    pub fn build(mut self) -> Result<LabeledTree, TreeError> {
        if self.names.is_empty() {
            return Err(TreeError::Empty);
        }
        let n = self.names.len();
        let components = (0..n).filter(|&i| self.find(i) == i).count();
        if components != 1 {
            return Err(TreeError::Disconnected(components));
        }
        Ok(LabeledTree::assemble(self.names, self.edges))
    }
}

impl LabeledTree {
    fn assemble(names: Vec<String>, edges: Vec<Edge>) -> Self {
        let n = names.len();
        let mut adjacency = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            adjacency[e.u.0].push((e.v, EdgeId(i)));
            adjacency[e.v.0].push((e.u, EdgeId(i)));
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut bfs = vec![VertexId(0)];
        seen[0] = true;
        let mut head = 0;
        while head < bfs.len() {
            let w = bfs[head];
            head += 1;
            for &(x, e) in &adjacency[w.0] {
                if !seen[x.0] {
                    seen[x.0] = true;
                    parent[x.0] = Some((w, e));
                    depth[x.0] = depth[w.0] + 1;
                    bfs.push(x);
                }
            }
        }
        LabeledTree { names, edges, adjacency, parent, depth, bfs }
    }

    /// Convenience constructor: `edges` are `(u, v, label_u, label_v)`.
    pub fn from_parts(names: &[&str], edges: &[(&str, &str, i64, i64)]) -> Result<Self, TreeError> {
        let mut b = TreeBuilder::new();
        for name in names {
            b.vertex(name)?;
        }
        for &(u, v, lu, lv) in edges {
            b.edge(u, v, lu, lv)?;
        }
        b.build()
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len()).map(VertexId)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name).map(VertexId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn root(&self) -> VertexId {
        VertexId(0)
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v.0]
    }

    /// Parent of `v` towards the root, with the connecting edge.
    pub fn parent(&self, v: VertexId) -> Option<(VertexId, EdgeId)> {
        self.parent[v.0]
    }

    /// Vertices in breadth-first order from the root.
    pub fn bfs_order(&self) -> &[VertexId] {
        &self.bfs
    }

    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        self.adjacency[a.0].iter().find(|(x, _)| *x == b).map(|&(_, e)| e)
    }

    /// Labels `(at a, at b)` of the edge joining adjacent vertices `a` and `b`.
    pub fn labels_between(&self, a: VertexId, b: VertexId) -> (&BigInt, &BigInt) {
        let e = self.edge(self.edge_between(a, b).expect("vertices are not adjacent"));
        (e.label_at(a), e.label_at(b))
    }

    /// Vertex sequence of the unique path from `u` to `v`, both included.
    pub fn path(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        let (mut a, mut b) = (u, v);
        let mut left = vec![a];
        let mut right = vec![b];
        while self.depth[a.0] > self.depth[b.0] {
            a = self.parent[a.0].unwrap().0;
            left.push(a);
        }
        while self.depth[b.0] > self.depth[a.0] {
            b = self.parent[b.0].unwrap().0;
            right.push(b);
        }
        while a != b {
            a = self.parent[a.0].unwrap().0;
            b = self.parent[b.0].unwrap().0;
            left.push(a);
            right.push(b);
        }
        right.pop();
        left.extend(right.into_iter().rev());
        left
    }

    pub fn is_normalized(&self) -> bool {
        self.edges.iter().all(|e| e.label_u.is_positive() && e.label_v.is_positive())
    }

    pub(crate) fn require_normalized(&self) -> Result<(), TreeError> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(TreeError::NotNormalized)
        }
    }

    /// Unordered vertex pairs `(u, v)` with `u < v`, in declaration order.
    pub fn vertex_pairs(&self) -> Vec<(VertexId, VertexId)> {
        let n = self.names.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (VertexId(i), VertexId(j))))
            .collect()
    }

    /// Renders the tree back into `.gbs` text.
    pub fn to_gbs(&self) -> String {
        let mut out = String::new();
        for n in &self.names {
            out.push_str(&format!("vertex {n}\n"));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} {} {} {}\n",
                self.name(e.u),
                self.name(e.v),
                e.label_u,
                e.label_v
            ));
        }
        out
    }
}

/// Parses a `.gbs` document into a validated tree.
pub fn parse_tree(text: &str) -> Result<LabeledTree, ParseError> {
    let mut b = TreeBuilder::new();
    let mut last_line = 0;
    let err = |line: usize, kind: ParseErrorKind| ParseError { line, kind };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields.as_slice() {
            ["vertex", name] => {
                b.vertex(name).map_err(|e| err(line, e.into()))?;
            }
            ["edge", u, v, lu, lv] => {
                let parse_int = |s: &str| {
                    s.parse::<BigInt>().map_err(|_| {
                        err(line, ParseErrorKind::Syntax(format!("`{s}` is not an integer")))
                    })
                };
                let (lu, lv) = (parse_int(lu)?, parse_int(lv)?);
                b.edge(u, v, lu, lv).map_err(|e| err(line, e.into()))?;
            }
            ["vertex", ..] => {
                return Err(err(line, ParseErrorKind::Syntax("expected `vertex NAME`".into())))
            }
            ["edge", ..] => {
                return Err(err(
                    line,
                    ParseErrorKind::Syntax("expected `edge NAME NAME INT INT`".into()),
                ))
            }
            [other, ..] => {
                return Err(err(line, ParseErrorKind::Syntax(format!("unknown directive `{other}`"))))
            }
            [] => unreachable!(),
        }
    }
    b.build().map_err(|e| err(last_line.max(1), e.into()))
}

/// Makes every label positive by admissible sign changes.
///
/// Walks the tree breadth-first from the root. For each edge from a parent
/// `p` to a child `c`: if the label at `p` is negative the edge is flipped
/// (both labels negated); then if the label at `c` is negative every label at
/// `c` is negated, which replaces `x_c` by its inverse. Returns the new tree
/// and the vertices whose generator was inverted.
pub fn normalize_signs_with_flips(tree: &LabeledTree) -> (LabeledTree, Vec<VertexId>) {
    let mut edges = tree.edges.clone();
    let mut flipped = Vec::new();
    for &c in tree.bfs.iter().skip(1) {
        let (p, e) = tree.parent[c.0].unwrap();
        {
            let edge = &mut edges[e.0];
            let at_p_negative = if edge.u == p { edge.label_u.is_negative() } else { edge.label_v.is_negative() };
            if at_p_negative {
                edge.label_u = -edge.label_u.clone();
                edge.label_v = -edge.label_v.clone();
            }
        }
        if edges[e.0].label_at(c).is_negative() {
            flipped.push(c);
            for &(_, f) in &tree.adjacency[c.0] {
                let edge = &mut edges[f.0];
                if edge.u == c {
                    edge.label_u = -edge.label_u.clone();
                } else {
                    edge.label_v = -edge.label_v.clone();
                }
            }
        }
    }
    (LabeledTree::assemble(tree.names.clone(), edges), flipped)
}

pub fn normalize_signs(tree: &LabeledTree) -> LabeledTree {
    normalize_signs_with_flips(tree).0
}

/// The relation `x_source^source_exp = x_target^target_exp` induced along the
/// tree path. Exponents are not reduced by their common divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathRelation {
    pub source: VertexId,
    pub target: VertexId,
    pub source_exp: BigInt,
    pub target_exp: BigInt,
}

impl PathRelation {
    /// The relator `x_source^K x_target^-L`.
    pub fn relator(&self) -> GroupWord {
        GroupWord::from_syllables(vec![
            (self.source, self.source_exp.clone()),
            (self.target, -self.target_exp.clone()),
        ])
    }
}

pub fn path_relation(tree: &LabeledTree, u: VertexId, v: VertexId) -> Result<PathRelation, TreeError> {
    tree.require_normalized()?;
    for w in [u, v] {
        if w.0 >= tree.vertex_count() {
            return Err(TreeError::UnknownVertex(format!("#{}", w.0)));
        }
    }
    if u == v {
        return Err(TreeError::SameVertex(tree.name(u).to_string()));
    }
    let path = tree.path(u, v);
    let (first_s, first_t) = tree.labels_between(path[0], path[1]);
    let mut source_exp = first_s.clone();
    let mut target_exp = first_t.clone();
    for w in path[1..].windows(2) {
        let (n, m) = tree.labels_between(w[0], w[1]);
        let c = target_exp.lcm(n);
        source_exp *= &c / &target_exp;
        target_exp = m * (&c / n);
    }
    Ok(PathRelation { source: u, target: v, source_exp, target_exp })
}

/// `<generators | relators>`; relators are words over generator indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<GroupWord>,
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} | ", self.generators.join(", "))?;
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| r.display_with(&self.generators).to_string())
            .collect();
        write!(f, "{} >", rels.join(", "))
    }
}

pub fn standard_presentation(tree: &LabeledTree) -> Presentation {
    let relators = tree
        .edges
        .iter()
        .map(|e| GroupWord::from_syllables(vec![(e.u, e.label_u.clone()), (e.v, -e.label_v.clone())]))
        .collect();
    Presentation { generators: tree.names.clone(), relators }
}
