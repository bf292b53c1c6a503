//! Finite nilpotent quotients as a one-sided membership test.
//!
//! An element of `γ_ω(G)` (resp. `(N_p)_ω(G)`) dies in every finite
//! nilpotent (resp. finite `p`-group) quotient. This module searches a small
//! catalog of such groups for a homomorphism that keeps a given element
//! alive. Finding none proves nothing beyond "no witness up to the catalog".

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::arith::is_prime;
use crate::error::GroupError;
use crate::tree_model::{LabeledTree, VertexId};
use crate::words::GroupWord;

/// A finite group given by its Cayley table on `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    order: usize,
    table: Vec<u32>,
    identity: u32,
    inverse: Vec<u32>,
    class: usize,
    tag: String,
}

const FULL_ASSOCIATIVITY_LIMIT: usize = 64;
const ASSOCIATIVITY_SAMPLES: usize = 20_000;

impl FiniteGroupTable {
    /// Tabulates `mul` and checks the group axioms and nilpotency.
    pub fn from_fn(order: usize, tag: impl Into<String>, mul: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        let tag = tag.into();
        let bad = |why: &str| GroupError::InvalidTable(format!("{tag}: {why}"));
        if order == 0 {
            return Err(bad("empty"));
        }
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let c = mul(a, b);
                if c >= order {
                    return Err(bad("product out of range"));
                }
                table.push(c as u32);
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] as usize == x && table[x * order + e] as usize == x))
            .ok_or_else(|| bad("no identity"))? as u32;
        let mut inverse = Vec::with_capacity(order);
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| table[a * order + b] == identity && table[b * order + a] == identity)
                .ok_or_else(|| bad("missing inverse"))?;
            inverse.push(inv as u32);
        }
        let mut g = FiniteGroupTable { order, table, identity, inverse, class: 0, tag: tag.clone() };
        let assoc = |g: &FiniteGroupTable, a: u32, b: u32, c: u32| g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c));
        if order <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..order as u32 {
                for b in 0..order as u32 {
                    for c in 0..order as u32 {
                        if !assoc(&g, a, b, c) {
                            return Err(bad("not associative"));
                        }
                    }
                }
            }
        } else {
            let mut rng = StdRng::seed_from_u64(0x5eed);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                let (a, b, c) = (rng.gen_range(0..order as u32), rng.gen_range(0..order as u32), rng.gen_range(0..order as u32));
                if !assoc(&g, a, b, c) {
                    return Err(bad("not associative"));
                }
            }
        }
        g.class = g.lower_central_series().ok_or_else(|| bad("not nilpotent"))?.len() - 1;
        Ok(g)
    }

    pub fn trivial() -> Self {
        Self::from_fn(1, "1", |_, _| 0).unwrap()
    }

    pub fn cyclic(n: usize) -> Self {
        Self::from_fn(n, format!("ℤ_{n}"), |a, b| (a + b) % n).expect("cyclic groups are groups")
    }

    /// `ℤ_{p^{e_1}} × … × ℤ_{p^{e_k}}`, elements in mixed radix.
    pub fn abelian(moduli: &[usize]) -> Self {
        let order: usize = moduli.iter().product();
        let tag = abelian_tag(moduli);
        Self::from_fn(order, tag, |a, b| {
            let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
            for &m in moduli {
                out += ((a % m + b % m) % m) * place;
                place *= m;
                a /= m;
                b /= m;
            }
            out
        })
        .expect("products of cyclic groups are groups")
    }

    /// Upper unitriangular 3×3 matrices over `ℤ_p`; `(a, b, c)` is the
    /// matrix with `a`, `b` on the superdiagonal and `c` in the corner.
    pub fn unitriangular(p: usize) -> Self {
        let decode = |x: usize| (x % p, (x / p) % p, x / (p * p));
        Self::from_fn(p * p * p, format!("UT3(ℤ_{p})"), |x, y| {
            let (a, b, c) = decode(x);
            let (a2, b2, c2) = decode(y);
            let (a3, b3, c3) = ((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p);
            a3 + p * b3 + p * p * c3
        })
        .expect("unitriangular matrices form a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn is_abelian(&self) -> bool {
        self.class <= 1
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, a: u32, e: &BigInt) -> u32 {
        let mut k = e.mod_floor(&BigInt::from(self.order)).to_usize().unwrap();
        let (mut base, mut acc) = (a, self.identity);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `g ↦ g^e` for every element.
    pub fn power_map(&self, e: &BigInt) -> Vec<u32> {
        (0..self.order as u32).map(|g| self.pow(g, e)).collect()
    }

    fn closure(&self, gens: &[u32]) -> Vec<bool> {
        let mut member = vec![false; self.order];
        member[self.identity as usize] = true;
        let mut list = vec![self.identity];
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y as usize] {
                    member[y as usize] = true;
                    list.push(y);
                }
            }
        }
        member
    }

    /// `γ_1 = G ⊇ γ_2 ⊇ …` down to the trivial subgroup, or `None` if it stalls.
    pub fn lower_central_series(&self) -> Option<Vec<Vec<bool>>> {
        let mut series = vec![vec![true; self.order]];
        loop {
            let current = series.last().unwrap();
            if current.iter().filter(|&&m| m).count() == 1 {
                return Some(series);
            }
            let mut gens: Vec<u32> = Vec::new();
            let mut seen = vec![false; self.order];
            for x in (0..self.order as u32).filter(|&x| current[x as usize]) {
                for y in 0..self.order as u32 {
                    let c = self.commutator(x, y);
                    if !seen[c as usize] {
                        seen[c as usize] = true;
                        gens.push(c);
                    }
                }
            }
            let next = self.closure(&gens);
            if next == *current {
                return None;
            }
            series.push(next);
        }
    }
}

fn abelian_tag(moduli: &[usize]) -> String {
    if moduli.is_empty() {
        return "1".into();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < moduli.len() {
        let run = moduli[i..].iter().take_while(|&&m| m == moduli[i]).count();
        parts.push(if run == 1 { format!("ℤ_{}", moduli[i]) } else { format!("ℤ_{}^{run}", moduli[i]) });
        i += run;
    }
    parts.join(" × ")
}

/// Partitions of `n` into non-increasing parts, largest first.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Abelian `p`-groups of order at most `max_order` for each listed prime,
/// ordered by order then by partition, followed by `UT3(ℤ_p)` when `p³ ≤ max_order`.
pub fn build_catalog(max_order: u64, primes: &[u64]) -> Result<Vec<FiniteGroupTable>, GroupError> {
    let mut out = Vec::new();
    for &p in primes {
        if !is_prime(&BigInt::from(p)) {
            return Err(GroupError::NotPrime(BigInt::from(p)));
        }
        let mut n = 1u32;
        while let Some(q) = p.checked_pow(n).filter(|&q| q <= max_order) {
            let _ = q;
            for parts in partitions(n) {
                let moduli: Vec<usize> = parts.iter().map(|&e| p.pow(e) as usize).collect();
                out.push(FiniteGroupTable::abelian(&moduli));
            }
            n += 1;
        }
        if p.checked_pow(3).is_some_and(|q| q <= max_order) {
            out.push(FiniteGroupTable::unitriangular(p as usize));
        }
    }
    Ok(out)
}

/// Images of the vertex generators, indexed by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    pub images: Vec<u32>,
}

impl Homomorphism {
    pub fn preserves_relations(&self, tree: &LabeledTree, g: &FiniteGroupTable) -> bool {
        tree.edges().iter().all(|e| {
            g.pow(self.images[e.u.0], &e.label_u) == g.pow(self.images[e.v.0], &e.label_v)
        })
    }

    pub fn evaluate(&self, word: &GroupWord, g: &FiniteGroupTable) -> u32 {
        evaluate(word, g, |v| self.images[v.0])
    }
}

fn evaluate(word: &GroupWord, g: &FiniteGroupTable, image: impl Fn(VertexId) -> u32) -> u32 {
    word.syllables().iter().fold(g.identity(), |acc, (v, e)| g.mul(acc, g.pow(image(*v), e)))
}

/// Per-edge power maps at both endpoints.
struct EdgeMaps {
    at_u: Vec<Vec<u32>>,
    at_v: Vec<Vec<u32>>,
}

impl EdgeMaps {
    fn new(tree: &LabeledTree, g: &FiniteGroupTable) -> Self {
        EdgeMaps {
            at_u: tree.edges().iter().map(|e| g.power_map(&e.label_u)).collect(),
            at_v: tree.edges().iter().map(|e| g.power_map(&e.label_v)).collect(),
        }
    }

    /// Power maps `(at a, at b)` for adjacent `a`, `b`.
    fn between(&self, tree: &LabeledTree, a: VertexId, b: VertexId) -> (&[u32], &[u32]) {
        let e = tree.edge_between(a, b).unwrap();
        if tree.edge(e).u == a {
            (&self.at_u[e.0], &self.at_v[e.0])
        } else {
            (&self.at_v[e.0], &self.at_u[e.0])
        }
    }
}

/// Arc-consistent image domains; on a tree every value left in a domain
/// extends to a full homomorphism.
fn consistent_domains(tree: &LabeledTree, g: &FiniteGroupTable, maps: &EdgeMaps, mut dom: Vec<Vec<bool>>) -> Vec<Vec<bool>> {
    let order = g.order();
    let reach = |values: &[bool], pm: &[u32]| {
        let mut r = vec![false; order];
        for (x, &ok) in values.iter().enumerate() {
            if ok {
                r[pm[x] as usize] = true;
            }
        }
        r
    };
    for &v in tree.bfs_order()[1..].iter().rev() {
        let (p, _) = tree.parent(v).unwrap();
        let (pm_p, pm_v) = maps.between(tree, p, v);
        let r = reach(&dom[v.0], pm_v);
        for h in 0..order {
            dom[p.0][h] &= r[pm_p[h] as usize];
        }
    }
    for &v in &tree.bfs_order()[1..] {
        let (p, _) = tree.parent(v).unwrap();
        let (pm_p, pm_v) = maps.between(tree, p, v);
        let r = reach(&dom[p.0], pm_p);
        for x in 0..order {
            dom[v.0][x] &= r[pm_v[x] as usize];
        }
    }
    dom
}

fn full_domains(tree: &LabeledTree, g: &FiniteGroupTable) -> Vec<Vec<bool>> {
    vec![vec![true; g.order()]; tree.vertex_count()]
}

/// Every homomorphism from the tree group to `target`.
pub fn enumerate_homs(tree: &LabeledTree, target: &FiniteGroupTable) -> Vec<Homomorphism> {
    let maps = EdgeMaps::new(tree, target);
    let dom = consistent_domains(tree, target, &maps, full_domains(tree, target));
    let order = tree.bfs_order();
    let mut out = Vec::new();
    let mut images = vec![0u32; tree.vertex_count()];
    fn go(
        i: usize,
        order: &[VertexId],
        tree: &LabeledTree,
        maps: &EdgeMaps,
        dom: &[Vec<bool>],
        images: &mut Vec<u32>,
        out: &mut Vec<Homomorphism>,
    ) {
        if i == order.len() {
            out.push(Homomorphism { images: images.clone() });
            return;
        }
        let v = order[i];
        let need = tree.parent(v).map(|(p, _)| {
            let (pm_p, _) = maps.between(tree, p, v);
            pm_p[images[p.0] as usize]
        });
        for x in 0..dom[v.0].len() {
            if !dom[v.0][x] {
                continue;
            }
            if let (Some(need), Some((p, _))) = (need, tree.parent(v)) {
                if maps.between(tree, p, v).1[x] != need {
                    continue;
                }
            }
            images[v.0] = x as u32;
            go(i + 1, order, tree, maps, dom, images, out);
        }
    }
    go(0, order, tree, &maps, &dom, &mut images, &mut out);
    out
}

/// Number of homomorphisms, by dynamic programming over the tree.
pub fn count_homs(tree: &LabeledTree, target: &FiniteGroupTable) -> BigInt {
    let maps = EdgeMaps::new(tree, target);
    let n = target.order();
    // ways[v][x]: extensions of x_v ↦ x to the subtree below v
    let mut ways = vec![vec![BigInt::one(); n]; tree.vertex_count()];
    for &v in tree.bfs_order()[1..].iter().rev() {
        let (p, _) = tree.parent(v).unwrap();
        let (pm_p, pm_v) = maps.between(tree, p, v);
        let mut by_value = vec![BigInt::from(0); n];
        for x in 0..n {
            by_value[pm_v[x] as usize] += &ways[v.0][x];
        }
        for h in 0..n {
            let w = by_value[pm_p[h] as usize].clone();
            ways[p.0][h] *= w;
        }
    }
    ways[tree.root().0].iter().sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub group: String,
    pub hom: Homomorphism,
    /// Image of the element, never the identity.
    pub image: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilationReport {
    /// No homomorphism into the catalog keeps the element alive.
    pub annihilated: bool,
    pub groups_checked: usize,
    pub witness: Option<Witness>,
}

/// Searches `target` for a homomorphism that does not kill `word`.
pub fn find_witness(tree: &LabeledTree, word: &GroupWord, target: &FiniteGroupTable) -> Option<Witness> {
    let support = word.support();
    let s0 = *support.first()?;
    let maps = EdgeMaps::new(tree, target);
    let dom = consistent_domains(tree, target, &maps, full_domains(tree, target));

    // Steiner subtree of the support, rooted at s0, listed by distance
    let mut parent_of = vec![None; tree.vertex_count()];
    let mut in_tree = vec![false; tree.vertex_count()];
    let mut depth = vec![0usize; tree.vertex_count()];
    in_tree[s0.0] = true;
    for &s in &support[1..] {
        let path = tree.path(s0, s);
        for (i, w) in path.iter().enumerate().skip(1) {
            in_tree[w.0] = true;
            parent_of[w.0] = Some(path[i - 1]);
            depth[w.0] = i;
        }
    }
    let mut nodes: Vec<VertexId> = tree.vertices().filter(|v| in_tree[v.0]).collect();
    nodes.sort_by_key(|v| (depth[v.0], v.0));
    let slot = |v: VertexId| nodes.iter().position(|&w| w == v).unwrap();
    let mut pending_children = vec![0usize; nodes.len()];
    for &w in &nodes[1..] {
        pending_children[slot(parent_of[w.0].unwrap())] += 1;
    }
    let is_support = |v: VertexId| support.binary_search(&v).is_ok();

    const DEAD: u32 = u32::MAX;
    let mut states: HashSet<Vec<u32>> = HashSet::new();
    for x in (0..target.order()).filter(|&x| dom[s0.0][x]) {
        let mut s = vec![DEAD; nodes.len()];
        s[0] = x as u32;
        states.insert(s);
    }
    for (i, &w) in nodes.iter().enumerate().skip(1) {
        let p = parent_of[w.0].unwrap();
        let ps = slot(p);
        let (pm_p, pm_w) = maps.between(tree, p, w);
        let mut fibre: Vec<Vec<u32>> = vec![Vec::new(); target.order()];
        for x in (0..target.order()).filter(|&x| dom[w.0][x]) {
            fibre[pm_w[x] as usize].push(x as u32);
        }
        pending_children[ps] -= 1;
        let erase_parent = pending_children[ps] == 0 && !is_support(p);
        let mut next = HashSet::with_capacity(states.len());
        for s in &states {
            for &x in &fibre[pm_p[s[ps] as usize] as usize] {
                let mut t = s.clone();
                t[i] = x;
                if erase_parent {
                    t[ps] = DEAD;
                }
                next.insert(t);
            }
        }
        states = next;
    }

    let mut sorted: Vec<&Vec<u32>> = states.iter().collect();
    sorted.sort();
    for s in sorted {
        let image = evaluate(word, target, |v| s[slot(v)]);
        if image == target.identity() {
            continue;
        }
        let mut pinned = dom.clone();
        for &v in &support {
            let x = s[slot(v)] as usize;
            pinned[v.0] = (0..target.order()).map(|y| y == x).collect();
        }
        let pinned = consistent_domains(tree, target, &maps, pinned);
        let mut images = vec![0u32; tree.vertex_count()];
        for &v in tree.bfs_order() {
            let need = tree.parent(v).map(|(p, _)| (p, maps.between(tree, p, v).0[images[p.0] as usize]));
            let x = (0..target.order())
                .find(|&x| {
                    pinned[v.0][x]
                        && need.is_none_or(|(p, n)| maps.between(tree, p, v).1[x] == n)
                })
                .expect("arc-consistent domains extend");
            images[v.0] = x as u32;
        }
        let hom = Homomorphism { images };
        debug_assert!(hom.preserves_relations(tree, target));
        debug_assert_eq!(hom.evaluate(word, target), image);
        return Some(Witness { group: target.tag().to_string(), hom, image });
    }
    None
}

pub fn annihilation_check(tree: &LabeledTree, word: &GroupWord, catalog: &[FiniteGroupTable]) -> AnnihilationReport {
    for (i, g) in catalog.iter().enumerate() {
        if let Some(w) = find_witness(tree, word, g) {
            return AnnihilationReport { annihilated: false, groups_checked: i + 1, witness: Some(w) };
        }
    }
    AnnihilationReport { annihilated: true, groups_checked: catalog.len(), witness: None }
}

/// As [`annihilation_check`] against the `p`-groups of order at most `max_order`.
pub fn annihilation_check_p(
    tree: &LabeledTree,
    word: &GroupWord,
    p: u64,
    max_order: u64,
) -> Result<AnnihilationReport, GroupError> {
    Ok(annihilation_check(tree, word, &build_catalog(max_order, &[p])?))
}

/// With `k = κ·s` and `l = λ·r`, whether `gcd(κ, λ) = 1`, which puts
/// `[a^s, b^r]` in `γ_ω(⟨a, b | a^k = b^l⟩)`.
pub fn coprime_commutator_check(k: &BigInt, l: &BigInt, s: &BigInt, r: &BigInt) -> Result<bool, GroupError> {
    for (value, divisor) in [(k, s), (l, r)] {
        if divisor.is_zero_or_negative() || !value.is_multiple_of(divisor) {
            return Err(GroupError::NotDivisible { value: value.clone(), divisor: divisor.clone() });
        }
    }
    Ok((k / s).gcd(&(l / r)).is_one())
}

trait ZeroOrNegative {
    fn is_zero_or_negative(&self) -> bool;
}

impl ZeroOrNegative for BigInt {
    fn is_zero_or_negative(&self) -> bool {
        self.sign() != num_bigint::Sign::Plus
    }
}
