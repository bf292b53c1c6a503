//! Normal generating sets for `γ_ω`, the intersection of the lower central
//! series.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::arith::{factorize, PrimePower};
use crate::center::quotient_by_center;
use crate::error::GroupError;
use crate::tree_model::{path_relation, LabeledTree, VertexId};
use crate::words::{is_trivial, Commutator};

/// Prime factorizations of `k` and `l` split into shared and private primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentFactorization {
    pub k: BigInt,
    pub l: BigInt,
    /// `(p_i, κ_i, λ_i)` for primes dividing both, ascending.
    pub shared: Vec<(BigInt, u32, u32)>,
    pub only_k: Vec<PrimePower>,
    pub only_l: Vec<PrimePower>,
    pub xi_k: BigInt,
    pub xi_l: BigInt,
}

pub fn segment_factorization(k: &BigInt, l: &BigInt) -> Result<SegmentFactorization, GroupError> {
    let fk = factorize(k)?;
    let fl = factorize(l)?;
    let mut shared = Vec::new();
    let mut only_k = Vec::new();
    for pk in &fk {
        match fl.iter().find(|pl| pl.prime == pk.prime) {
            Some(pl) => shared.push((pk.prime.clone(), pk.exponent, pl.exponent)),
            None => only_k.push(pk.clone()),
        }
    }
    let only_l = fl.iter().filter(|pl| !fk.iter().any(|pk| pk.prime == pl.prime)).cloned().collect();
    let xi_k = shared.iter().map(|(p, a, _)| p.pow(*a)).product();
    let xi_l = shared.iter().map(|(p, _, b)| p.pow(*b)).product();
    Ok(SegmentFactorization { k: k.clone(), l: l.clone(), shared, only_k, only_l, xi_k, xi_l })
}

/// Generator labels of a two-vertex segment: `a` comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SegmentGen {
    A,
    B,
}

/// Normal generators of `γ_ω(⟨a, b | a^k = b^l⟩)`.
///
/// For each shared prime `p_i` this emits `[a^{p_i^{κ_i}}, b^{ξ_l / p_i^{λ_i}}]`
/// and `[b^{p_i^{λ_i}}, a^{ξ_k / p_i^{κ_i}}]`, oriented with `a` on the left
/// and without repeats. Coprime `k, l` give `[a, b]`.
pub fn gamma_segment_set(k: &BigInt, l: &BigInt) -> Result<Vec<Commutator<SegmentGen>>, GroupError> {
    let f = segment_factorization(k, l)?;
    let mut out: Vec<Commutator<SegmentGen>> = Vec::new();
    let mut push = |c: Commutator<SegmentGen>| {
        if !out.contains(&c) {
            out.push(c);
        }
    };
    if f.shared.is_empty() {
        push(Commutator::new((SegmentGen::A, BigInt::one()), (SegmentGen::B, BigInt::one())));
    }
    for (p, kappa, lambda) in &f.shared {
        let (pk, pl) = (p.pow(*kappa), p.pow(*lambda));
        push(Commutator::new((SegmentGen::A, pk.clone()), (SegmentGen::B, &f.xi_l / &pl)));
        push(Commutator::new((SegmentGen::B, pl), (SegmentGen::A, &f.xi_k / &pk)));
    }
    Ok(out)
}

/// A finite abelian free factor given by cyclic prime-power components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianFactor {
    pub components: Vec<PrimePower>,
    pub free_rank: usize,
}

/// Generator `j` of free factor `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentId {
    pub factor: usize,
    pub component: usize,
}

/// Normal generators of `γ_ω` of a free product of finite abelian groups:
/// commutators of components from different factors with different primes.
pub fn gamma_free_product_abelian(
    factors: &[AbelianFactor],
) -> Result<Vec<Commutator<ComponentId>>, GroupError> {
    if let Some(i) = factors.iter().position(|f| f.free_rank > 0) {
        return Err(GroupError::UnsupportedFreePart(i));
    }
    let mut out = Vec::new();
    for (i1, f1) in factors.iter().enumerate() {
        for (i2, f2) in factors.iter().enumerate().skip(i1 + 1) {
            for (j1, c1) in f1.components.iter().enumerate() {
                for (j2, c2) in f2.components.iter().enumerate() {
                    if c1.prime != c2.prime {
                        out.push(Commutator::new(
                            (ComponentId { factor: i1, component: j1 }, BigInt::one()),
                            (ComponentId { factor: i2, component: j2 }, BigInt::one()),
                        ));
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Pair exponents from the path relation `x_u^K = x_v^L`.
    Path,
    /// Pair exponents from the orders `(d_u, d_v)` of the quotient by the center.
    #[default]
    CenterOrder,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairContribution {
    pub u: VertexId,
    pub v: VertexId,
    /// Exponents the segment formula was applied to.
    pub k: BigInt,
    pub l: BigInt,
    pub elements: Vec<Commutator>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaOmega {
    pub pairs: Vec<PairContribution>,
    /// Union over pairs, first occurrence order.
    pub elements: Vec<Commutator>,
    /// Elements removed because they are trivial in the group.
    pub trivial: Vec<Commutator>,
}

fn substitute(c: &Commutator<SegmentGen>, u: VertexId, v: VertexId) -> Commutator {
    let map = |g: SegmentGen| if g == SegmentGen::A { u } else { v };
    Commutator::new((map(c.left.0), c.left.1.clone()), (map(c.right.0), c.right.1.clone()))
}

pub fn gamma_omega_tree(tree: &LabeledTree, mode: Mode, filter_trivial: bool) -> Result<GammaOmega, GroupError> {
    tree.require_normalized()?;
    let orders = quotient_by_center(tree)?.orders;
    let mut result = GammaOmega { pairs: Vec::new(), elements: Vec::new(), trivial: Vec::new() };
    for (u, v) in tree.vertex_pairs() {
        let (k, l) = match mode {
            Mode::Path => {
                let r = path_relation(tree, u, v)?;
                (r.source_exp, r.target_exp)
            }
            Mode::CenterOrder => (orders[u.0].clone(), orders[v.0].clone()),
        };
        let mut elements = Vec::new();
        for c in gamma_segment_set(&k, &l)? {
            let c = substitute(&c, u, v);
            if filter_trivial && is_trivial(tree, &c.to_word())? {
                if !result.trivial.contains(&c) {
                    result.trivial.push(c);
                }
            } else {
                if !result.elements.contains(&c) {
                    result.elements.push(c.clone());
                }
                elements.push(c);
            }
        }
        result.pairs.push(PairContribution { u, v, k, l, elements });
    }
    Ok(result)
}

/// `k` and `l` are powers (exponent ≥ 0) of one common prime.
pub fn is_residually_nilpotent_segment(k: &BigInt, l: &BigInt) -> Result<bool, GroupError> {
    let f = factorize(&(k * l))?;
    Ok(f.len() <= 1)
}

pub fn gamma_is_commutator_subgroup(k: &BigInt, l: &BigInt) -> bool {
    k.gcd(l).is_one()
}
