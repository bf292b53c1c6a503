//! Normal generating sets for `(N_p)_ω`, the intersection of all normal
//! subgroups of `p`-power index.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::abelian::{AbelianInvariants, IntMatrix};
use crate::arith::{ext_gcd, is_power_of, is_prime, split_prime};
use crate::error::GroupError;
use crate::tree_model::{path_relation, LabeledTree, VertexId};
use crate::words::{is_trivial, Commutator, GroupWord};

/// `k = p^κ k₁`, `l = p^λ l₁` with `p ∤ k₁ l₁`, and `d₁ = gcd(k₁, l₁)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpSegmentData {
    pub p: BigInt,
    pub kappa: u32,
    pub lambda: u32,
    pub k1: BigInt,
    pub l1: BigInt,
    pub d1: BigInt,
}

pub fn np_segment_data(k: &BigInt, l: &BigInt, p: &BigInt) -> Result<NpSegmentData, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p.clone()));
    }
    crate::arith::factorize(k)?;
    crate::arith::factorize(l)?;
    let (kappa, k1) = split_prime(k, p);
    let (lambda, l1) = split_prime(l, p);
    let d1 = k1.gcd(&l1);
    Ok(NpSegmentData { p: p.clone(), kappa, lambda, k1, l1, d1 })
}

/// A normal generator: either `x_u^s x_v^{-t}` or a commutator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element<G = VertexId> {
    Power { u: G, v: G, u_exp: BigInt, v_exp: BigInt },
    Commutator(Commutator<G>),
}

impl<G: Copy + Ord> Element<G> {
    fn map<H: Copy + Ord>(&self, f: impl Fn(G) -> H) -> Element<H> {
        match self {
            Element::Power { u, v, u_exp, v_exp } => {
                Element::Power { u: f(*u), v: f(*v), u_exp: u_exp.clone(), v_exp: v_exp.clone() }
            }
            Element::Commutator(c) => Element::Commutator(Commutator::new(
                (f(c.left.0), c.left.1.clone()),
                (f(c.right.0), c.right.1.clone()),
            )),
        }
    }
}

impl Element<VertexId> {
    pub fn to_word(&self) -> GroupWord {
        match self {
            Element::Power { u, v, u_exp, v_exp } => {
                GroupWord::from_syllables(vec![(*u, u_exp.clone()), (*v, -v_exp.clone())])
            }
            Element::Commutator(c) => c.to_word(),
        }
    }

    pub fn display_with<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> impl fmt::Display + 'a {
        ElementDisplay { e: self, names }
    }
}

struct ElementDisplay<'a, S> {
    e: &'a Element,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for ElementDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.e {
            Element::Power { .. } => write!(f, "{}", self.e.to_word().display_with(self.names)),
            Element::Commutator(c) => write!(f, "{}", c.display_with(self.names)),
        }
    }
}

/// Two abstract generators `a` (index 0) and `b` (index 1).
pub const SEG_A: VertexId = VertexId(0);
pub const SEG_B: VertexId = VertexId(1);

/// `{a^{k/d₁} b^{-l/d₁}, [a, b^{p^λ}], [a^{p^κ}, b]}` with the reductions:
/// the power word is dropped when `d₁ = 1` (it is then the defining relator),
/// and both commutators collapse to `[a, b]` when `κ = 0` or `λ = 0`.
pub fn np_segment_set(k: &BigInt, l: &BigInt, p: &BigInt) -> Result<Vec<Element>, GroupError> {
    let d = np_segment_data(k, l, p)?;
    let mut out = Vec::new();
    if !d.d1.is_one() {
        out.push(Element::Power { u: SEG_A, v: SEG_B, u_exp: k / &d.d1, v_exp: l / &d.d1 });
    }
    let one = BigInt::one;
    if d.kappa == 0 || d.lambda == 0 {
        out.push(Element::Commutator(Commutator::new((SEG_A, one()), (SEG_B, one()))));
    } else {
        out.push(Element::Commutator(Commutator::new((SEG_A, one()), (SEG_B, p.pow(d.lambda)))));
        out.push(Element::Commutator(Commutator::new((SEG_A, p.pow(d.kappa)), (SEG_B, one()))));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpPair {
    pub u: VertexId,
    pub v: VertexId,
    pub k: BigInt,
    pub l: BigInt,
    pub elements: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpOmega {
    pub p: BigInt,
    pub pairs: Vec<NpPair>,
    pub elements: Vec<Element>,
    pub trivial: Vec<Element>,
}

pub fn np_omega_tree(tree: &LabeledTree, p: &BigInt, filter_trivial: bool) -> Result<NpOmega, GroupError> {
    tree.require_normalized()?;
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p.clone()));
    }
    let mut out = NpOmega { p: p.clone(), pairs: Vec::new(), elements: Vec::new(), trivial: Vec::new() };
    for (u, v) in tree.vertex_pairs() {
        let r = path_relation(tree, u, v)?;
        let mut elements = Vec::new();
        for e in np_segment_set(&r.source_exp, &r.target_exp, p)? {
            let e = e.map(|g| if g == SEG_A { u } else { v });
            if filter_trivial && is_trivial(tree, &e.to_word())? {
                if !out.trivial.contains(&e) {
                    out.trivial.push(e);
                }
            } else {
                if !out.elements.contains(&e) {
                    out.elements.push(e.clone());
                }
                elements.push(e);
            }
        }
        out.pairs.push(NpPair { u, v, k: r.source_exp, l: r.target_exp, elements });
    }
    Ok(out)
}

/// Power words of adjacent pairs only, the first stage of the two-step quotient.
pub fn staged_adjacent_elements(tree: &LabeledTree, p: &BigInt) -> Result<Vec<Element>, GroupError> {
    tree.require_normalized()?;
    let mut out = Vec::new();
    for e in tree.edges() {
        for el in np_segment_set(&e.label_u, &e.label_v, p)? {
            if let Element::Power { .. } = el {
                out.push(el.map(|g| if g == SEG_A { e.u } else { e.v }));
            }
        }
    }
    Ok(out)
}

/// Exponent rows `(k/d₁)` at `u`, `-(l/d₁)` at `v`, one per vertex pair.
///
/// With `d₁ = 1` the row is the path relation itself. Adjoining commutators
/// adds zero rows, so these rows present the abelianization of the quotient
/// by the `(N_p)_ω` generators.
pub fn pair_relation_matrix(tree: &LabeledTree, p: &BigInt) -> Result<IntMatrix, GroupError> {
    let n = tree.vertex_count();
    let mut rows = Vec::new();
    for (u, v) in tree.vertex_pairs() {
        let r = path_relation(tree, u, v)?;
        let d = np_segment_data(&r.source_exp, &r.target_exp, p)?;
        let mut row = vec![BigInt::from(0); n];
        row[u.0] = &r.source_exp / &d.d1;
        row[v.0] = -(&r.target_exp / &d.d1);
        rows.push(row);
    }
    Ok(IntMatrix::from_rows(rows, n).expect("rows have one entry per vertex"))
}

pub fn is_residually_p_segment(k: &BigInt, l: &BigInt, p: &BigInt) -> Result<bool, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p.clone()));
    }
    Ok(is_power_of(k, p) && is_power_of(l, p))
}

/// New basis `γ = a^{k/d} b^{-l/d}`, `δ = a^y b^x` of the free abelian group
/// on `a, b`, where `xk + yl = d`. Inverse: `a = γ^x δ^{l/d}`, `b = γ^{-y} δ^{k/d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisChange {
    pub d: BigInt,
    pub x: BigInt,
    pub y: BigInt,
    /// Rows give `γ` and `δ` in terms of `(a, b)`.
    pub forward: [[BigInt; 2]; 2],
    /// Rows give `a` and `b` in terms of `(γ, δ)`.
    pub backward: [[BigInt; 2]; 2],
}

impl BasisChange {
    pub fn determinant(&self) -> BigInt {
        let m = &self.forward;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentAbelianization {
    pub basis: BasisChange,
    pub invariants: AbelianInvariants,
}

/// `⟨a, b | a^k = b^l⟩^ab ≅ ℤ_d × ℤ` with `d = gcd(k, l)`; the relator becomes `γ^d`.
pub fn abelianize_segment(k: &BigInt, l: &BigInt) -> Result<SegmentAbelianization, GroupError> {
    crate::arith::factorize(k)?;
    crate::arith::factorize(l)?;
    let (d, x, y) = ext_gcd(k, l)?;
    let (kd, ld) = (k / &d, l / &d);
    let basis = BasisChange {
        forward: [[kd.clone(), -ld.clone()], [y.clone(), x.clone()]],
        backward: [[x.clone(), ld], [-y.clone(), kd]],
        d: d.clone(),
        x,
        y,
    };
    let torsion = if d.is_one() { vec![] } else { vec![d] };
    Ok(SegmentAbelianization { basis, invariants: AbelianInvariants { torsion, free_rank: 1 } })
}
