//! Words in the vertex generators and the word problem of a tree amalgam.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::tree_model::{LabeledTree, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
}

/// A freely reduced word `x_{v1}^{e1} ... x_{vn}^{en}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupWord {
    syllables: Vec<(VertexId, BigInt)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a word from raw syllables, freely reducing them.
    pub fn from_syllables(syllables: Vec<(VertexId, BigInt)>) -> Self {
        free_reduce(GroupWord { syllables })
    }

    pub fn generator(v: VertexId) -> Self {
        Self::power_of(v, BigInt::one())
    }

    pub fn power_of(v: VertexId, e: impl Into<BigInt>) -> Self {
        Self::from_syllables(vec![(v, e.into())])
    }

    pub fn syllables(&self) -> &[(VertexId, BigInt)] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn inverse(&self) -> Self {
        GroupWord {
            syllables: self.syllables.iter().rev().map(|(v, e)| (*v, -e)).collect(),
        }
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        let mut s = self.syllables.clone();
        s.extend(other.syllables.iter().cloned());
        Self::from_syllables(s)
    }

    pub fn pow(&self, n: &BigInt) -> Self {
        let base = if n.is_negative() { self.inverse() } else { self.clone() };
        let mut out = GroupWord::identity();
        let mut k = n.abs();
        while k.is_positive() {
            out = out.concat(&base);
            k -= 1;
        }
        out
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(a: &GroupWord, b: &GroupWord) -> Self {
        a.inverse().concat(&b.inverse()).concat(a).concat(b)
    }

    /// Exponent sum of each generator among `n` generators.
    pub fn exponent_sums(&self, n: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n];
        for (v, e) in &self.syllables {
            out[v.0] += e;
        }
        out
    }

    /// Distinct generators occurring in the word, sorted.
    pub fn support(&self) -> Vec<VertexId> {
        let mut s: Vec<VertexId> = self.syllables.iter().map(|(v, _)| *v).collect();
        s.sort();
        s.dedup();
        s
    }

    pub fn display_with<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> impl fmt::Display + 'a {
        WordDisplay { word: self, names }
    }

    fn check_range(&self, n: usize) -> Result<(), WordError> {
        match self.syllables.iter().find(|(v, _)| v.0 >= n) {
            Some((v, _)) => Err(WordError::VertexOutOfRange(v.0)),
            None => Ok(()),
        }
    }
}

impl std::ops::Mul for &GroupWord {
    type Output = GroupWord;
    fn mul(self, rhs: &GroupWord) -> GroupWord {
        self.concat(rhs)
    }
}

struct WordDisplay<'a, S> {
    word: &'a GroupWord,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for WordDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.word.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write_power(f, self.names[v.0].as_ref(), e)?;
        }
        Ok(())
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, name: &str, e: &BigInt) -> fmt::Result {
    if e.is_one() {
        f.write_str(name)
    } else {
        write!(f, "{name}^{e}")
    }
}

/// Merges adjacent syllables on the same generator and drops zero exponents.
pub fn free_reduce(word: GroupWord) -> GroupWord {
    let mut out: Vec<(VertexId, BigInt)> = Vec::with_capacity(word.syllables.len());
    for (v, e) in word.syllables {
        if e.is_zero() {
            continue;
        }
        match out.last_mut() {
            Some((w, f)) if *w == v => {
                *f += e;
                if f.is_zero() {
                    out.pop();
                }
            }
            _ => out.push((v, e)),
        }
    }
    GroupWord { syllables: out }
}

/// `[x^a, y^b]` on single generator powers, stored with the smaller
/// generator on the left. A commutator given the other way round is stored
/// as its inverse, which has the same normal closure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Commutator<G = VertexId> {
    pub left: (G, BigInt),
    pub right: (G, BigInt),
}

impl<G: Ord + Copy> Commutator<G> {
    pub fn new(left: (G, BigInt), right: (G, BigInt)) -> Self {
        if (right.0, &right.1) < (left.0, &left.1) {
            Commutator { left: right, right: left }
        } else {
            Commutator { left, right }
        }
    }
}

impl Commutator<VertexId> {
    pub fn to_word(&self) -> GroupWord {
        GroupWord::commutator(
            &GroupWord::power_of(self.left.0, self.left.1.clone()),
            &GroupWord::power_of(self.right.0, self.right.1.clone()),
        )
    }

    pub fn display_with<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> impl fmt::Display + 'a {
        CommutatorDisplay { c: self, names }
    }
}

struct CommutatorDisplay<'a, S> {
    c: &'a Commutator<VertexId>,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for CommutatorDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        write_power(f, self.names[self.c.left.0 .0].as_ref(), &self.c.left.1)?;
        f.write_str(", ")?;
        write_power(f, self.names[self.c.right.0 .0].as_ref(), &self.c.right.1)?;
        f.write_str("]")
    }
}

/// Canonical form of `word` in the group presented by `tree`.
///
/// The word is read as a closed walk in the tree starting at the root, each
/// generator power sitting at its vertex. Moving back across an edge whose
/// pending power lies in the edge subgroup transports it to the other side.
/// The resulting reduced walk is then rewritten left to right so that each
/// power, except the final one at the root, is the least nonnegative residue
/// modulo the label of the edge it leaves by. Two words are equal in the
/// group iff their canonical forms coincide.
pub fn normal_form(tree: &LabeledTree, word: &GroupWord) -> Result<GroupWord, WordError> {
    word.check_range(tree.vertex_count())?;
    let mut walk: Vec<(VertexId, BigInt)> = vec![(tree.root(), BigInt::zero())];
    let move_to = |walk: &mut Vec<(VertexId, BigInt)>, target: VertexId| {
        let here = walk.last().unwrap().0;
        for next in tree.path(here, target).into_iter().skip(1) {
            let cur = walk.last().unwrap().0;
            let backtrack = walk.len() >= 2 && walk[walk.len() - 2].0 == next;
            if backtrack {
                let (l_cur, l_next) = tree.labels_between(cur, next);
                let pending = &walk.last().unwrap().1;
                if pending.is_multiple_of(l_cur) {
                    let q = pending / l_cur;
                    walk.pop();
                    walk.last_mut().unwrap().1 += q * l_next;
                    continue;
                }
            }
            walk.push((next, BigInt::zero()));
        }
    };
    for (v, e) in word.syllables() {
        move_to(&mut walk, *v);
        walk.last_mut().unwrap().1 += e;
    }
    move_to(&mut walk, tree.root());

    for i in 0..walk.len().saturating_sub(1) {
        let (cur, next) = (walk[i].0, walk[i + 1].0);
        let (l_cur, l_next) = tree.labels_between(cur, next);
        let (q, s) = walk[i].1.div_mod_floor(&l_cur.abs());
        walk[i].1 = s;
        walk[i + 1].1 += q * l_cur.signum() * l_next;
    }
    Ok(GroupWord {
        syllables: walk.into_iter().filter(|(_, e)| !e.is_zero()).collect(),
    })
}

pub fn is_trivial(tree: &LabeledTree, word: &GroupWord) -> Result<bool, WordError> {
    Ok(normal_form(tree, word)?.is_empty())
}

/// Parses the word mini-syntax.
///
/// ```text
/// word   := factor (('*')? factor)*
/// factor := atom ('^' integer)?
/// atom   := NAME | '1' | '(' word ')' | '[' word ',' word ']'
/// ```
///
/// Names are looked up in `names`; their position is the generator index.
pub fn parse_word<S: AsRef<str>>(text: &str, names: &[S]) -> Result<GroupWord, WordError> {
    let mut p = WordParser { text, pos: 0, names };
    let w = p.word()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(w)
}

struct WordParser<'a, S> {
    text: &'a str,
    pos: usize,
    names: &'a [S],
}

impl<S: AsRef<str>> WordParser<'_, S> {
    fn error(&self, message: &str) -> WordError {
        WordError::Syntax { pos: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), WordError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn starts_atom(&mut self) -> bool {
        self.skip_ws();
        matches!(self.peek(), Some(c) if c == '(' || c == '[' || c == '1' || is_name_char(c))
    }

    fn word(&mut self) -> Result<GroupWord, WordError> {
        let mut w = self.factor()?;
        loop {
            if self.eat('*') || self.starts_atom() {
                w = w.concat(&self.factor()?);
            } else {
                return Ok(w);
            }
        }
    }

    fn factor(&mut self) -> Result<GroupWord, WordError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.integer()?;
            Ok(base.pow(&e))
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<BigInt, WordError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.text[start..self.pos]
            .parse::<BigInt>()
            .map_err(|_| WordError::Syntax { pos: start, message: "expected an integer exponent".into() })
    }

    fn atom(&mut self) -> Result<GroupWord, WordError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.word()?;
                self.expect(',')?;
                let b = self.word()?;
                self.expect(']')?;
                Ok(GroupWord::commutator(&a, &b))
            }
            Some('1') => {
                self.pos += 1;
                Ok(GroupWord::identity())
            }
            Some(c) if is_name_char(c) => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if is_name_char(c) || c.is_ascii_digit()) {
                    self.pos += self.peek().unwrap().len_utf8();
                }
                let name = &self.text[start..self.pos];
                self.names
                    .iter()
                    .position(|n| n.as_ref() == name)
                    .map(|i| GroupWord::generator(VertexId(i)))
                    .ok_or_else(|| WordError::UnknownGenerator(name.to_string()))
            }
            _ => Err(self.error("expected a generator, `1`, `(` or `[`")),
        }
    }
}

fn is_name_char(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}
