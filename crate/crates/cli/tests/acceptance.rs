//! Acceptance run on the five-vertex reference tree.
//!
//! Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use gbs_cli::{cmd_np_omega, TreeInput};
use gbs_core::abelian::{
    restrict_to_power_subgroup, smith_normal_form, subgroup_matrix_invariants, AbelianInvariants, IntMatrix,
};
use gbs_core::arith::crt_decomposition;
use gbs_core::center::{center_exponents, center_p_parts, modulus_hom};
use gbs_core::gamma_omega::{gamma_omega_tree, gamma_segment_set, Mode, SegmentGen};
use gbs_core::np_omega::{np_omega_tree, pair_relation_matrix, Element};
use gbs_core::oracle::{annihilation_check, annihilation_check_p, build_catalog, enumerate_homs, FiniteGroupTable};
use gbs_core::reference::reference_tree;
use gbs_core::tree_model::{normalize_signs, path_relation, standard_presentation, TreeBuilder};
use gbs_core::words::{is_trivial, normal_form};
use gbs_core::{Commutator, GroupWord, LabeledTree, VertexId};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<(), String>;

/// Id, title, check, time limit.
type Criterion = (&'static str, &'static str, fn() -> Check, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn data(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect()
}

fn matrix(name: &str) -> IntMatrix {
    IntMatrix::parse(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

fn vid(t: &LabeledTree, name: &str) -> VertexId {
    t.vertex(name).unwrap()
}

/// Unoriented commutator key: sides ordered by vertex index.
type Key = ((usize, BigInt), (usize, BigInt));

fn key(a: (usize, BigInt), b: (usize, BigInt)) -> Key {
    if a.0 <= b.0 {
        (a, b)
    } else {
        (b, a)
    }
}

fn commutator_key(c: &Commutator) -> Key {
    key((c.left.0 .0, c.left.1.clone()), (c.right.0 .0, c.right.1.clone()))
}

/// The final generating set of γ_ω for the reference tree, as printed,
/// orientation included.
const PRINTED_GAMMA: [(&str, i64, &str, i64); 36] = [
    ("α", 147, "β", 4),
    ("α", 196, "β", 3),
    ("α", 12, "β", 7),
    ("β", 21, "α", 4),
    ("β", 28, "α", 3),
    ("β", 12, "α", 49),
    ("α", 4, "γ", 9),
    ("α", 3, "γ", 2),
    ("α", 4, "δ", 3),
    ("α", 3, "δ", 16),
    ("α", 3, "ε", 1),
    ("α", 1, "ε", 27),
    ("β", 15, "γ", 2),
    ("β", 20, "γ", 9),
    ("β", 12, "γ", 5),
    ("γ", 45, "β", 4),
    ("γ", 10, "β", 3),
    ("γ", 18, "β", 5),
    ("β", 15, "δ", 16),
    ("β", 20, "δ", 3),
    ("β", 12, "δ", 5),
    ("δ", 15, "β", 4),
    ("δ", 80, "β", 3),
    ("δ", 48, "β", 5),
    ("β", 5, "ε", 27),
    ("β", 3, "ε", 5),
    ("γ", 5, "ε", 27),
    ("γ", 9, "ε", 5),
    ("δ", 5, "ε", 27),
    ("δ", 3, "ε", 5),
    ("γ", 45, "δ", 16),
    ("γ", 10, "δ", 3),
    ("γ", 18, "δ", 5),
    ("δ", 15, "γ", 2),
    ("δ", 80, "γ", 9),
    ("δ", 48, "γ", 5),
];

/// The ten printed (N_3)_ω sets, per pair, in the tool's notation.
const PRINTED_N3: [(&str, &str, &[&str]); 10] = [
    ("α", "β", &["α^21 * β^-15", "[α, β^3]", "[α^3, β]"]),
    ("α", "γ", &["[α, γ^9]", "[α^3, γ]"]),
    ("α", "δ", &["α^147 * δ^-60", "[α, δ^3]", "[α^3, δ]"]),
    ("α", "ε", &["[α, ε^27]", "[α^3, ε]"]),
    ("β", "γ", &["[β, γ]"]),
    ("β", "δ", &["[β, δ^3]", "[β^3, δ]"]),
    ("β", "ε", &["β^28 * ε^-9", "[β, ε]"]),
    ("γ", "δ", &["[γ, δ^3]", "[γ^9, δ]"]),
    ("γ", "ε", &["γ^2 * ε^-3", "[γ, ε]"]),
    ("δ", "ε", &["δ^48 * ε^-27", "[δ, ε^27]", "[δ^3, ε]"]),
];

/// `[x^a, y^b]` is trivial when `x^K = y^L` along the path and `K | a` or
/// `L | b`: that power then lies in the other cyclic factor.
fn certified_trivial(t: &LabeledTree, (x, a): (usize, &BigInt), (y, b): (usize, &BigInt)) -> bool {
    let r = path_relation(t, VertexId(x), VertexId(y)).unwrap();
    a.is_multiple_of(&r.source_exp) || b.is_multiple_of(&r.target_exp)
}

fn criterion_1() -> Check {
    let c = center_exponents(&reference_tree()).map_err(|e| e.to_string())?;
    let want: Vec<BigInt> = [588, 420, 90, 240, 135].map(big).to_vec();
    ensure!(c.exponents == want, "exponents {:?}", c.exponents);
    Ok(())
}

fn criterion_2() -> Check {
    let t = reference_tree();
    let want = [
        ("α", "β", 42, 30),
        ("α", "γ", 294, 45),
        ("α", "δ", 294, 120),
        ("α", "ε", 588, 135),
        ("β", "γ", 14, 3),
        ("β", "δ", 21, 12),
        ("β", "ε", 140, 45),
        ("γ", "δ", 9, 24),
        ("γ", "ε", 10, 15),
        ("δ", "ε", 240, 135),
    ];
    for (u, v, k, l) in want {
        let r = path_relation(&t, vid(&t, u), vid(&t, v)).map_err(|e| e.to_string())?;
        ensure!((r.source_exp.clone(), r.target_exp.clone()) == (big(k), big(l)), "({u}, {v}): {r:?}");
        // the relation really holds in the group
        ensure!(is_trivial(&t, &r.relator()).unwrap(), "({u}, {v}) relator is not trivial");
    }
    // γ^30 is not a power of α in the group, γ^45 is
    let a294 = GroupWord::power_of(vid(&t, "α"), 294);
    let g30 = GroupWord::power_of(vid(&t, "γ"), 30);
    ensure!(!is_trivial(&t, &a294.concat(&g30.inverse())).unwrap(), "α^294 = γ^30 holds");

    let input = TreeInput::from_bytes(&std::fs::read(data("reference.gbs")).unwrap()).unwrap();
    let doc = cmd_np_omega(&input, &big(3), false, true).map_err(|e| e.to_string())?.document;
    ensure!(
        doc.warnings.iter().any(|w| w.contains("(α, γ)") && w.contains("γ^45") && w.contains("γ^30")),
        "erratum warning missing: {:?}",
        doc.warnings
    );
    Ok(())
}

fn criterion_3() -> Check {
    let t = reference_tree();
    let printed: Vec<Key> = PRINTED_GAMMA
        .iter()
        .map(|&(x, a, y, b)| key((vid(&t, x).0, big(a)), (vid(&t, y).0, big(b))))
        .collect();
    let printed_set: BTreeSet<Key> = printed.iter().cloned().collect();
    ensure!(printed_set.len() == 36, "printed set has repeats");

    let raw = gamma_omega_tree(&t, Mode::CenterOrder, false).map_err(|e| e.to_string())?;
    let raw_keys: Vec<Key> = raw.elements.iter().map(commutator_key).collect();
    let raw_set: BTreeSet<Key> = raw_keys.iter().cloned().collect();
    ensure!(raw_keys.len() == 36 && raw_set == printed_set, "raw output differs from the printed set");

    // filtering drops exactly the elements that are trivial in G
    let filtered = gamma_omega_tree(&t, Mode::CenterOrder, true).map_err(|e| e.to_string())?;
    let kept: BTreeSet<Key> = filtered.elements.iter().map(commutator_key).collect();
    let dropped: BTreeSet<Key> = filtered.trivial.iter().map(commutator_key).collect();
    ensure!(kept.len() == 28 && dropped.len() == 8, "kept {} dropped {}", kept.len(), dropped.len());
    ensure!(kept.is_disjoint(&dropped), "kept and dropped overlap");
    ensure!(kept.union(&dropped).cloned().collect::<BTreeSet<_>>() == printed_set, "filtered ∪ dropped ≠ printed");
    for ((x, a), (y, b)) in &printed_set {
        let certified = certified_trivial(&t, (*x, a), (*y, b));
        let is_dropped = dropped.contains(&((*x, a.clone()), (*y, b.clone())));
        ensure!(certified == is_dropped, "[{}^{a}, {}^{b}] certified {certified}, dropped {is_dropped}", t.names()[*x], t.names()[*y]);
    }
    Ok(())
}

fn element_strings(t: &LabeledTree, es: &[Element]) -> BTreeSet<String> {
    es.iter().map(|e| e.display_with(t.names()).to_string()).collect()
}

fn criterion_4() -> Check {
    let t = reference_tree();
    let raw = np_omega_tree(&t, &big(3), false).map_err(|e| e.to_string())?;
    ensure!(raw.pairs.len() == 10, "{} pairs", raw.pairs.len());
    for (pair, (u, v, printed)) in raw.pairs.iter().zip(PRINTED_N3) {
        ensure!((pair.u, pair.v) == (vid(&t, u), vid(&t, v)), "pair order");
        let got = element_strings(&t, &pair.elements);
        let want: BTreeSet<String> = printed.iter().map(|s| s.to_string()).collect();
        ensure!(pair.elements.len() == printed.len() && got == want, "H_{u}^{v}: {got:?} vs {want:?}");
    }

    let filtered = np_omega_tree(&t, &big(3), true).map_err(|e| e.to_string())?;
    let dropped = element_strings(&t, &filtered.trivial);
    ensure!(dropped == BTreeSet::from(["[γ^9, δ]".to_string()]), "dropped {dropped:?}");
    ensure!(certified_trivial(&t, (vid(&t, "γ").0, &big(9)), (vid(&t, "δ").0, &big(1))), "[γ^9, δ] not certified");
    let mut all = element_strings(&t, &raw.elements);
    all.remove("[γ^9, δ]");
    ensure!(element_strings(&t, &filtered.elements) == all, "filtered union mismatch");
    Ok(())
}

fn check_snf(a: &IntMatrix, want: &[i64]) -> Check {
    let d = smith_normal_form(a);
    ensure!(d.diagonal() == want.iter().map(|&x| big(x)).collect::<Vec<_>>(), "diagonal {:?}", d.diagonal());
    ensure!(d.u.mul(a).mul(&d.v) == d.s, "U·A·V ≠ S");
    ensure!(d.u.det().magnitude() == BigInt::from(1).magnitude(), "U not unimodular");
    ensure!(d.v.det().magnitude() == BigInt::from(1).magnitude(), "V not unimodular");
    for i in 0..d.s.rows() {
        for j in 0..d.s.cols() {
            ensure!(i == j || d.s[(i, j)] == big(0), "S has an off-diagonal entry at ({i}, {j})");
        }
    }
    ensure!(d.certifies(a), "certificate rejected");
    Ok(())
}

fn criterion_5() -> Check {
    let start = Instant::now();
    check_snf(&matrix("matrix_a.txt"), &[1, 1, 3, 3, 0])?;
    let a_time = start.elapsed();
    let start = Instant::now();
    check_snf(&matrix("matrix_b.txt"), &[1, 1, 1, 1, 0])?;
    let b_time = start.elapsed();
    ensure!(a_time.max(b_time) < Duration::from_secs(1), "A {a_time:?}, B {b_time:?}");
    Ok(())
}

fn criterion_6() -> Check {
    let t = reference_tree();
    let a = pair_relation_matrix(&t, &big(3)).map_err(|e| e.to_string())?;
    ensure!(a == matrix("matrix_a.txt"), "constructed A differs from the printed A");
    let three = AbelianInvariants { torsion: vec![big(3), big(3)], free_rank: 1 };
    ensure!(subgroup_matrix_invariants(&a) == three, "G̃^ab from A");

    // same group from the edge relators and the emitted elements
    let mut rows: Vec<Vec<BigInt>> = standard_presentation(&t).relators.iter().map(|r| r.exponent_sums(5)).collect();
    for e in np_omega_tree(&t, &big(3), true).unwrap().elements {
        rows.push(e.to_word().exponent_sums(5));
    }
    let inv = subgroup_matrix_invariants(&IntMatrix::from_rows(rows, 5).unwrap());
    ensure!(inv.to_string() == "ℤ × ℤ_3 × ℤ_3", "G̃^ab from relators: {inv}");

    let exps = center_p_parts(&t, &big(3)).map_err(|e| e.to_string())?;
    ensure!(exps == [3, 3, 9, 3, 27].map(big).to_vec(), "N generators {exps:?}");
    let b = restrict_to_power_subgroup(&a, &exps);
    ensure!(b == matrix("matrix_b.txt"), "constructed B differs from the printed B");
    let n = subgroup_matrix_invariants(&b);
    ensure!(n.to_string() == "ℤ", "N ≅ {n}");
    Ok(())
}

fn criterion_7() -> Check {
    let want: [(i64, &[i64]); 5] = [
        (588, &[147, 196, 12]),
        (420, &[105, 140, 84, 60]),
        (90, &[45, 10, 18]),
        (240, &[15, 80, 48]),
        (135, &[5, 27]),
    ];
    for (d, back) in want {
        let s = crt_decomposition(&big(d)).map_err(|e| e.to_string())?;
        ensure!(s.backward_exponents == back.iter().map(|&x| big(x)).collect::<Vec<_>>(), "{d}: {:?}", s.backward_exponents);
        // x ↦ (x·f_i mod m_i) ↦ Σ b_i·(x·f_i mod m_i) is the identity of ℤ_d
        for x in 0..d {
            let x = big(x);
            let mut y = big(0);
            for ((pp, f), b) in s.components.iter().zip(&s.forward_exponents).zip(&s.backward_exponents) {
                y += b * (&x * f).mod_floor(&pp.value());
            }
            ensure!(y.mod_floor(&big(d)) == x, "{d}: composite sends {x} to {y}");
        }
    }
    Ok(())
}

fn criterion_8a() -> Check {
    for k in 1..=60 {
        for l in 1..=60 {
            for c in gamma_segment_set(&big(k), &big(l)).map_err(|e| e.to_string())? {
                let order = |(g, e): &(SegmentGen, BigInt)| {
                    let n = if *g == SegmentGen::A { big(k) } else { big(l) };
                    &n / n.gcd(e)
                };
                let (oa, ob) = (order(&c.left), order(&c.right));
                ensure!(c.left.0 != c.right.0, "({k}, {l}): one-sided commutator");
                ensure!(oa.gcd(&ob) == big(1), "({k}, {l}): orders {oa} and {ob}");
            }
        }
    }
    Ok(())
}

fn criterion_8b() -> Check {
    for p in [2i64, 3, 5, 7] {
        let powers: Vec<i64> = (0..).map(|e| p.pow(e)).take_while(|&q| q <= 81).collect();
        for &k in &powers {
            for &l in &powers {
                let t = LabeledTree::from_parts(&["a", "b"], &[("a", "b", k, l)]).unwrap();
                for mode in [Mode::CenterOrder, Mode::Path] {
                    let g = gamma_omega_tree(&t, mode, true).map_err(|e| e.to_string())?;
                    ensure!(g.elements.is_empty(), "γ_ω of ({k}, {l})");
                }
                let n = np_omega_tree(&t, &big(p), true).map_err(|e| e.to_string())?;
                ensure!(n.elements.is_empty(), "(N_{p})_ω of ({k}, {l})");
            }
        }
    }
    Ok(())
}

fn criterion_8c() -> Check {
    let mut rng = StdRng::seed_from_u64(500);
    for i in 0..500 {
        let rows: Vec<Vec<BigInt>> =
            (0..6).map(|_| (0..6).map(|_| big(rng.gen_range(-50..=50))).collect()).collect();
        let a = IntMatrix::from_rows(rows, 6).unwrap();
        let d = smith_normal_form(&a);
        ensure!(d.certifies(&a) && d.u.mul(&a).mul(&d.v) == d.s, "matrix {i}:\n{a}");
        let diag = d.diagonal();
        for w in diag.windows(2) {
            ensure!(w[0].is_zero_or_divides(&w[1]), "matrix {i}: divisibility chain {diag:?}");
        }
        let product: BigInt = diag.iter().product();
        ensure!(product.magnitude() == a.det().magnitude(), "matrix {i}: |det| ≠ product of invariants");
    }
    Ok(())
}

trait DividesExt {
    fn is_zero_or_divides(&self, other: &BigInt) -> bool;
}

impl DividesExt for BigInt {
    fn is_zero_or_divides(&self, other: &BigInt) -> bool {
        if *self == big(0) {
            *other == big(0)
        } else {
            other.is_multiple_of(self)
        }
    }
}

fn random_tree(rng: &mut StdRng) -> LabeledTree {
    let n = rng.gen_range(1..=5);
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut b = TreeBuilder::new();
    for name in &names {
        b.vertex(name).unwrap();
    }
    for i in 1..n {
        let mut label = || rng.gen_range(1..=12) * if rng.gen_bool(0.2) { -1 } else { 1 };
        let (m, l) = (label(), label());
        let parent = rng.gen_range(0..i);
        b.edge(&names[parent], &names[i], m, l).unwrap();
    }
    normalize_signs(&b.build().unwrap())
}

fn random_word(rng: &mut StdRng, n: usize) -> GroupWord {
    let len = rng.gen_range(0..=10);
    let syllables = (0..len)
        .map(|_| {
            let e = rng.gen_range(1..=30) * if rng.gen_bool(0.5) { -1 } else { 1 };
            (VertexId(rng.gen_range(0..n)), big(e))
        })
        .collect();
    GroupWord::from_syllables(syllables)
}

fn criterion_8d() -> Check {
    let mut rng = StdRng::seed_from_u64(1000);
    let targets = [
        FiniteGroupTable::cyclic(4),
        FiniteGroupTable::cyclic(3),
        FiniteGroupTable::abelian(&[2, 2]),
        FiniteGroupTable::unitriangular(2),
        FiniteGroupTable::unitriangular(3),
    ];
    for tree_index in 0..20 {
        let t = random_tree(&mut rng);
        let n = t.vertex_count();
        let m = modulus_hom(&t).map_err(|e| e.to_string())?;
        let modulus = |w: &GroupWord| -> BigInt { w.exponent_sums(n).iter().zip(&m.images).map(|(s, i)| s * i).sum() };
        let homs: Vec<_> = targets
            .iter()
            .flat_map(|g| enumerate_homs(&t, g).into_iter().take(6).map(move |h| (g, h)))
            .collect();
        let relators = standard_presentation(&t).relators;
        let nf = |w: &GroupWord| normal_form(&t, w).unwrap();
        for _ in 0..1000 {
            let (w, v) = (random_word(&mut rng, n), random_word(&mut rng, n));
            let fw = nf(&w);
            ensure!(nf(&fw) == fw, "tree {tree_index}: normal form not idempotent on {w:?}");
            ensure!(modulus(&fw) == modulus(&w), "tree {tree_index}: modulus image changed for {w:?}");
            for (g, h) in &homs {
                ensure!(h.evaluate(&fw, g) == h.evaluate(&w, g), "tree {tree_index}: image in {} changed for {w:?}", g.tag());
            }
            ensure!(nf(&w.concat(&v)) == nf(&fw.concat(&nf(&v))), "tree {tree_index}: product of {w:?} and {v:?}");
            if let Some(r) = relators.get(rng.gen_range(0..relators.len().max(1))) {
                ensure!(nf(&w.concat(r).concat(&v)) == nf(&w.concat(&v)), "tree {tree_index}: relator insertion");
            }
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    let t = reference_tree();
    let catalog = build_catalog(27, &[2, 3, 5, 7]).map_err(|e| e.to_string())?;
    let gamma = gamma_omega_tree(&t, Mode::CenterOrder, false).unwrap();
    for c in &gamma.elements {
        let r = annihilation_check(&t, &c.to_word(), &catalog);
        ensure!(r.annihilated, "{} survives in {}", c.display_with(t.names()), r.witness.unwrap().group);
    }
    let np = np_omega_tree(&t, &big(3), false).unwrap();
    for e in &np.elements {
        let r = annihilation_check_p(&t, &e.to_word(), 3, 27).map_err(|e| e.to_string())?;
        ensure!(r.annihilated, "{} survives in {}", e.display_with(t.names()), r.witness.unwrap().group);
    }
    // the catalog does catch elements outside γ_ω
    let a = GroupWord::generator(vid(&t, "α"));
    ensure!(!annihilation_check(&t, &a, &catalog).annihilated, "α is annihilated");
    Ok(())
}

fn criterion_10() -> Check {
    let reference = data("reference.gbs");
    let reference = reference.to_str().unwrap();
    let runs: [&[&str]; 5] = [
        &["center", reference],
        &["gamma-omega", reference, "--keep-trivial"],
        &["np-omega", reference, "--p", "3", "--staged"],
        &["abelianization", reference, "--quotient", "np", "--p", "3"],
        &["check", reference, "[α^147, β^4]"],
    ];
    for args in runs {
        let run = || Command::new(env!("CARGO_BIN_EXE_gbs")).args(args).arg("--json").output().unwrap().stdout;
        let (first, second) = (run(), run());
        ensure!(!first.is_empty() && first == second, "{args:?}: outputs differ");
        let v: serde_json::Value = serde_json::from_slice(&first).map_err(|e| e.to_string())?;
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        ensure!(again.as_bytes() == first.as_slice(), "{args:?}: JSON does not round-trip");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("1", "center exponents (588, 420, 90, 240, 135)", criterion_1, Duration::from_secs(1)),
        ("2", "ten path relations, (α, γ) = (294, 45) with warning", criterion_2, Duration::from_secs(1)),
        ("3", "γ_ω set equals the printed 36 commutators", criterion_3, Duration::from_secs(5)),
        ("4", "(N_3)_ω per-pair sets equal the printed ten", criterion_4, Duration::from_secs(5)),
        ("5", "SNF(A) = (1,1,3,3,0), SNF(B) = (1,1,1,1,0), certified", criterion_5, Duration::from_secs(2)),
        ("6", "G̃^ab ≅ ℤ × ℤ_3 × ℤ_3 and N ≅ ℤ", criterion_6, Duration::from_secs(5)),
        ("7", "CRT backward exponents and round trip", criterion_7, Duration::from_secs(5)),
        ("8a", "segment commutators have coprime orders, k, l ≤ 60", criterion_8a, Duration::from_secs(60)),
        ("8b", "prime-power segments give empty sets, k, l ≤ 81", criterion_8b, Duration::from_secs(60)),
        ("8c", "500 random 6×6 SNF certificates", criterion_8c, Duration::from_secs(60)),
        ("8d", "normal form on 1000 random words per random tree", criterion_8d, Duration::from_secs(300)),
        ("9", "oracle annihilates every element of 3 and 4", criterion_9, Duration::from_secs(120)),
        ("10", "JSON output is byte-identical across runs", criterion_10, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (id, title, check, limit) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed <= limit {
                Ok(())
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(()) => println!("criterion {id:>3}  PASS  {title}  ({elapsed:.2?})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id:>3}  FAIL  {title}  ({elapsed:.2?}): {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
