use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// ASCII token for the one-vertex tree in the bracket encoding.
pub const LEAF_TOKEN: char = 'o';

/// Canonical unordered rooted tree with at most two children per vertex.
///
/// Children are kept sorted by size (largest first), ties broken by the
/// lexicographic order of their encodings, so two trees that are equal as
/// unordered trees share one representation and compare equal by encoding.
/// Cloning is a reference-count bump.
#[derive(Clone)]
pub struct Tree(Arc<Node>);

struct Node {
    code: String,
    size: usize,
    depth: usize,
    children: Vec<Tree>,
}

/// Order used for the children of a vertex: size descending, then encoding.
pub fn canonical_cmp(a: &Tree, b: &Tree) -> Ordering {
    b.size().cmp(&a.size()).then_with(|| a.encode().cmp(b.encode()))
}

/// The one-vertex tree.
pub fn leaf() -> Tree {
    Tree(Arc::new(Node {
        code: LEAF_TOKEN.to_string(),
        size: 1,
        depth: 0,
        children: Vec::new(),
    }))
}

/// Attach one or two subtrees to a new root.
pub fn graft(children: &[Tree]) -> Result<Tree> {
    if children.is_empty() || children.len() > 2 {
        return Err(Error::Arity(children.len()));
    }
    let mut kids = children.to_vec();
    kids.sort_by(canonical_cmp);
    let size = 1 + kids.iter().map(Tree::size).sum::<usize>();
    let depth = 1 + kids.iter().map(Tree::depth).max().unwrap_or(0);
    let mut code = String::with_capacity(size * 3);
    code.push('[');
    for (i, k) in kids.iter().enumerate() {
        if i > 0 {
            code.push(',');
        }
        code.push_str(k.encode());
    }
    code.push(']');
    Ok(Tree(Arc::new(Node {
        code,
        size,
        depth,
        children: kids,
    })))
}

/// `[t]`
pub fn graft1(t: &Tree) -> Tree {
    graft(std::slice::from_ref(t)).expect("one child")
}

/// `[a, b]`
pub fn graft2(a: &Tree, b: &Tree) -> Tree {
    graft(&[a.clone(), b.clone()]).expect("two children")
}

impl Tree {
    /// Number of vertices.
    pub fn size(&self) -> usize {
        self.0.size
    }

    /// Maximum number of edges from the root to a leaf.
    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn children(&self) -> &[Tree] {
        &self.0.children
    }

    pub fn is_leaf(&self) -> bool {
        self.0.children.is_empty()
    }

    /// Canonical nested-bracket encoding.
    pub fn encode(&self) -> &str {
        &self.0.code
    }

    /// Rebuild the tree through the public constructors. Always equal to
    /// `self` for canonical input.
    pub fn canonicalize(&self) -> Tree {
        if self.is_leaf() {
            return leaf();
        }
        let kids: Vec<Tree> = self.children().iter().map(Tree::canonicalize).collect();
        graft(&kids).expect("arity preserved")
    }

    /// Path tree `[...[o]...]` with `n` vertices.
    pub fn path(n: usize) -> Tree {
        assert!(n >= 1);
        let mut t = leaf();
        for _ in 1..n {
            t = graft1(&t);
        }
        t
    }

    /// Perfect binary tree of the given depth (size `2^(depth+1) - 1`).
    pub fn perfect(depth: usize) -> Tree {
        let mut t = leaf();
        for _ in 0..depth {
            t = graft2(&t, &t);
        }
        t
    }

    /// Pre-order visit of every vertex's subtree.
    pub fn for_each_subtree<F: FnMut(&Tree)>(&self, f: &mut F) {
        f(self);
        for c in self.children() {
            c.for_each_subtree(f);
        }
    }
}

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.code == other.0.code
    }
}

impl Eq for Tree {}

impl Hash for Tree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.code.hash(state);
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Size ascending, then encoding. This is the listing order used by
/// enumeration and exports.
impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.encode().cmp(other.encode()))
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.encode())
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.encode())
    }
}

impl std::str::FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tree> {
        decode(s)
    }
}

/// Canonical encoding of `t`.
pub fn encode(t: &Tree) -> String {
    t.encode().to_string()
}

/// Parse a bracket encoding. Child order in the input is irrelevant; the
/// result is canonical.
pub fn decode(s: &str) -> Result<Tree> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let t = p.tree(0)?;
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

const MAX_PARSE_DEPTH: usize = 4096;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn tree(&mut self, level: usize) -> Result<Tree> {
        if level > MAX_PARSE_DEPTH {
            return Err(self.err("nesting too deep"));
        }
        match self.src.get(self.pos) {
            Some(b'o') => {
                self.pos += 1;
                Ok(leaf())
            }
            Some(b'[') => {
                self.pos += 1;
                let mut kids = vec![self.tree(level + 1)?];
                loop {
                    match self.src.get(self.pos) {
                        Some(b',') => {
                            if kids.len() == 2 {
                                return Err(self.err("more than two children"));
                            }
                            self.pos += 1;
                            kids.push(self.tree(level + 1)?);
                        }
                        Some(b']') => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => return Err(self.err("expected ',' or ']'")),
                        None => return Err(self.err("unterminated '['")),
                    }
                }
                graft(&kids)
            }
            Some(_) => Err(self.err("expected 'o' or '['")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_basics() {
        let l = leaf();
        assert_eq!(l.size(), 1);
        assert_eq!(l.depth(), 0);
        assert_eq!(l.encode(), "o");
    }

    #[test]
    fn graft_is_order_free() {
        let l = leaf();
        let p = graft1(&l);
        assert_eq!(p.size(), 2);
        let a = graft(&[l.clone(), p.clone()]).unwrap();
        let b = graft(&[p.clone(), l.clone()]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.encode(), b.encode());
        assert_eq!(a.encode(), "[[o],o]");
    }

    #[test]
    fn graft_arity_errors() {
        assert!(matches!(graft(&[]), Err(Error::Arity(0))));
        let l = leaf();
        assert!(matches!(graft(&[l.clone(), l.clone(), l]), Err(Error::Arity(3))));
    }

    #[test]
    fn depth_examples() {
        let l = leaf();
        assert_eq!(graft2(&l, &l).depth(), 1);
        assert_eq!(graft2(&graft1(&l), &l).depth(), 2);
    }

    #[test]
    fn decode_errors_carry_position() {
        for (s, pos) in [("", 0), ("x", 0), ("[o", 2), ("[o,o,o]", 4), ("[]", 1), ("o]", 1), ("[o;o]", 2)] {
            match decode(s) {
                Err(Error::Parse { pos: p, .. }) => assert_eq!(p, pos, "input {s:?}"),
                other => panic!("{s:?} -> {other:?}"),
            }
        }
    }

    #[test]
    fn decode_canonicalizes() {
        let t = decode("[o,[o]]").unwrap();
        assert_eq!(t.encode(), "[[o],o]");
    }
}
