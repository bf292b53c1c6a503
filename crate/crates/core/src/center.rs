//! Center of a GBS tree group and the finite cyclic tree obtained by
//! factoring it out.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{is_power_of, is_prime};
use crate::error::GroupError;
use crate::tree_model::{EdgeId, LabeledTree, VertexId};

/// Minimal exponents `r_v` with every `x_v^{r_v}` equal to one central element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterData {
    /// `r_v`, indexed by vertex.
    pub exponents: Vec<BigInt>,
    /// `N_e` with `r_u = λ_e N_e` and `r_v = λ̄_e N_e`, indexed by edge.
    pub edge_multipliers: Vec<BigInt>,
    /// Single-vertex tree: the group is `ℤ` and the whole group is central.
    pub degenerate: bool,
}

pub fn center_exponents(tree: &LabeledTree) -> Result<CenterData, GroupError> {
    tree.require_normalized()?;
    let n = tree.vertex_count();
    if n == 1 {
        return Ok(CenterData {
            exponents: vec![BigInt::one()],
            edge_multipliers: Vec::new(),
            degenerate: true,
        });
    }
    // r_child / r_parent = λ_child / λ_parent along every edge
    let mut ratio = vec![BigRational::zero(); n];
    ratio[tree.root().0] = BigRational::one();
    for &v in &tree.bfs_order()[1..] {
        let (p, _) = tree.parent(v).unwrap();
        let (l_p, l_v) = tree.labels_between(p, v);
        ratio[v.0] = &ratio[p.0] * BigRational::new(l_v.clone(), l_p.clone());
    }
    let denom = ratio.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut weight: Vec<BigInt> = ratio.iter().map(|q| q.numer() * (&denom / q.denom())).collect();
    let g = weight.iter().fold(BigInt::zero(), |acc, w| acc.gcd(w));
    for w in &mut weight {
        *w /= &g;
    }
    // smallest multiple t with every label dividing t·w at its endpoint
    let mut t = BigInt::one();
    for e in tree.edges() {
        for (w, l) in [(&weight[e.u.0], &e.label_u), (&weight[e.v.0], &e.label_v)] {
            t = t.lcm(&(l / l.gcd(w)));
        }
    }
    let exponents: Vec<BigInt> = weight.iter().map(|w| w * &t).collect();
    let edge_multipliers = tree.edges().iter().map(|e| &exponents[e.u.0] / &e.label_u).collect();
    Ok(CenterData { exponents, edge_multipliers, degenerate: false })
}

/// Images `r / r_v` of the generators under the homomorphism onto `ℤ`, with `r = lcm r_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusHom {
    pub r: BigInt,
    pub images: Vec<BigInt>,
}

pub fn modulus_hom(tree: &LabeledTree) -> Result<ModulusHom, GroupError> {
    let c = center_exponents(tree)?;
    let r = c.exponents.iter().fold(BigInt::one(), |acc, x| acc.lcm(x));
    let images = c.exponents.iter().map(|x| &r / x).collect();
    Ok(ModulusHom { r, images })
}

/// The tree of finite cyclic groups `ℤ_{d_v}` with the original labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCyclicTree {
    pub tree: LabeledTree,
    pub orders: Vec<BigInt>,
}

impl FiniteCyclicTree {
    pub fn new(tree: LabeledTree, orders: Vec<BigInt>) -> Self {
        assert_eq!(tree.vertex_count(), orders.len());
        FiniteCyclicTree { tree, orders }
    }

    pub fn order(&self, v: VertexId) -> &BigInt {
        &self.orders[v.0]
    }

    /// Order of the edge subgroup `⟨x_u^λ⟩ ≤ ℤ_{d_u}`.
    pub fn edge_group_order(&self, e: EdgeId) -> BigInt {
        let edge = self.tree.edge(e);
        let d = &self.orders[edge.u.0];
        d / d.gcd(&edge.label_u)
    }
}

pub fn quotient_by_center(tree: &LabeledTree) -> Result<FiniteCyclicTree, GroupError> {
    let c = center_exponents(tree)?;
    Ok(FiniteCyclicTree::new(tree.clone(), c.exponents))
}

/// Edge whose edge group is the center of a tree of finite cyclic `p`-groups.
///
/// At a shared vertex the cyclic subgroups form a chain, so the edge group of
/// least order is contained in all others. Ties go to the lower edge index.
pub fn center_of_p_tree(t: &FiniteCyclicTree, p: &BigInt) -> Result<EdgeId, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p.clone()));
    }
    for d in &t.orders {
        if !is_power_of(d, p) {
            return Err(GroupError::NotPrimePower { value: d.clone(), prime: p.clone() });
        }
    }
    if t.tree.edges().is_empty() {
        return Err(GroupError::NoEdges);
    }
    let mut best: Option<(BigInt, EdgeId)> = None;
    for (i, e) in t.tree.edges().iter().enumerate() {
        for l in [&e.label_u, &e.label_v] {
            if !is_power_of(l, p) {
                return Err(GroupError::NotPrimePower { value: l.clone(), prime: p.clone() });
            }
        }
        let (du, dv) = (&t.orders[e.u.0], &t.orders[e.v.0]);
        let nu = du / du.gcd(&e.label_u);
        let nv = dv / dv.gcd(&e.label_v);
        if !du.is_multiple_of(&e.label_u) || !dv.is_multiple_of(&e.label_v) || nu != nv {
            return Err(GroupError::InconsistentEdge(i));
        }
        if best.as_ref().is_none_or(|(n, _)| nu < *n) {
            best = Some((nu, EdgeId(i)));
        }
    }
    Ok(best.unwrap().1)
}

/// `p`-parts of the center exponents.
pub fn center_p_parts(tree: &LabeledTree, p: &BigInt) -> Result<Vec<BigInt>, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p.clone()));
    }
    let c = center_exponents(tree)?;
    Ok(c.exponents.iter().map(|r| r / crate::arith::split_prime(r, p).1).collect())
}
