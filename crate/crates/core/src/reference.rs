//! The five-vertex worked example used throughout the tests and the CLI.

use crate::tree_model::{parse_tree, LabeledTree};

pub const REFERENCE_GBS: &str = "\
# five-vertex reference tree
vertex α
vertex β
vertex γ
vertex δ
vertex ε
edge α β 42 30
edge β γ 14 3
edge β δ 21 12
edge γ ε 10 15
";

pub fn reference_tree() -> LabeledTree {
    parse_tree(REFERENCE_GBS).expect("reference tree parses")
}

pub fn is_reference_tree(tree: &LabeledTree) -> bool {
    *tree == reference_tree()
}

/// Notes attached to any output that uses the (α, γ) path relation of the
/// reference tree.
pub fn erratum_notes(tree: &LabeledTree) -> Vec<String> {
    if is_reference_tree(tree) {
        vec!["pair (α, γ): path relation is α^294 = γ^45; the value γ^30 found in some printed \
              tables is a misprint (γ^45 is forced by the edges α–β 42/30 and β–γ 14/3)"
            .to_string()]
    } else {
        Vec::new()
    }
}
