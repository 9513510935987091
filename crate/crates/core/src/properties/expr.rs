//! Set expressions `Σ₁ ⊙ Σ₂ ⊙ …` over constraint indices.
//!
//! Text form uses `&` (intersection) and `|` (union), both left-associative with
//! equal precedence, so `1 | 2 & 3` means `(1 | 2) & 3`. Parentheses group.
//! `∩`/`∪` are accepted as aliases.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetOp {
    Intersection,
    Union,
}

impl SetOp {
    fn symbol(self) -> char {
        match self {
            SetOp::Intersection => '&',
            SetOp::Union => '|',
        }
    }
}

/// Leaves are 1-based constraint indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SetExpr {
    Leaf(usize),
    Node(SetOp, Box<SetExpr>, Box<SetExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExprError {
    Syntax { at: usize, message: String },
    LeafOutOfRange { leaf: usize, count: usize },
    LeafRepeated(usize),
    LeafMissing(usize),
}

impl fmt::Display for SetExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetExprError::Syntax { at, message } => write!(f, "expression syntax error at {at}: {message}"),
            SetExprError::LeafOutOfRange { leaf, count } => {
                write!(f, "leaf {leaf} does not name one of the {count} constraints")
            }
            SetExprError::LeafRepeated(i) => write!(f, "constraint {i} is used more than once"),
            SetExprError::LeafMissing(i) => write!(f, "constraint {i} does not appear in the expression"),
        }
    }
}

impl SetExpr {
    pub fn leaf(i: usize) -> SetExpr {
        SetExpr::Leaf(i)
    }

    pub fn and(self, rhs: SetExpr) -> SetExpr {
        SetExpr::Node(SetOp::Intersection, Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: SetExpr) -> SetExpr {
        SetExpr::Node(SetOp::Union, Box::new(self), Box::new(rhs))
    }

    /// Left-associated chain `((1 ⊙ 2) ⊙ 3) …`; `ops[k]` is the operator before leaf `k + 2`.
    pub fn chain(ops: &[SetOp]) -> SetExpr {
        let mut e = SetExpr::Leaf(1);
        for (k, &op) in ops.iter().enumerate() {
            e = SetExpr::Node(op, Box::new(e), Box::new(SetExpr::Leaf(k + 2)));
        }
        e
    }

    /// `1 & 2 & … & count`.
    pub fn conjunction(count: usize) -> SetExpr {
        SetExpr::chain(&vec![SetOp::Intersection; count.saturating_sub(1)])
    }

    /// Leaf indices, left to right.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            SetExpr::Leaf(i) => out.push(*i),
            SetExpr::Node(_, l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn is_conjunction(&self) -> bool {
        match self {
            SetExpr::Leaf(_) => true,
            SetExpr::Node(op, l, r) => *op == SetOp::Intersection && l.is_conjunction() && r.is_conjunction(),
        }
    }

    /// Operator sequence when the tree is the flat chain `1 ⊙ 2 ⊙ … ⊙ ℓ` evaluated left to right.
    pub fn flat_ops(&self) -> Option<Vec<SetOp>> {
        let mut ops = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                SetExpr::Leaf(1) => break,
                SetExpr::Leaf(_) => return None,
                SetExpr::Node(op, l, r) => {
                    ops.push(*op);
                    if !matches!(**r, SetExpr::Leaf(_)) {
                        return None;
                    }
                    cur = l;
                }
            }
        }
        ops.reverse();
        (self.leaves() == (1..=ops.len() + 1).collect::<Vec<_>>()).then_some(ops)
    }

    /// Every index `1..=count` appears exactly once.
    pub fn validate(&self, count: usize) -> Result<(), SetExprError> {
        let mut seen = vec![false; count];
        for leaf in self.leaves() {
            if leaf == 0 || leaf > count {
                return Err(SetExprError::LeafOutOfRange { leaf, count });
            }
            if seen[leaf - 1] {
                return Err(SetExprError::LeafRepeated(leaf));
            }
            seen[leaf - 1] = true;
        }
        match seen.iter().position(|s| !s) {
            Some(i) => Err(SetExprError::LeafMissing(i + 1)),
            None => Ok(()),
        }
    }

    /// Folds leaf memberships through the tree.
    pub fn eval(&self, member: &impl Fn(usize) -> bool) -> bool {
        match self {
            SetExpr::Leaf(i) => member(*i),
            SetExpr::Node(SetOp::Intersection, l, r) => l.eval(member) && r.eval(member),
            SetExpr::Node(SetOp::Union, l, r) => l.eval(member) || r.eval(member),
        }
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetExpr::Leaf(i) => write!(f, "{i}"),
            SetExpr::Node(op, l, r) => {
                write!(f, "{l} {} ", op.symbol())?;
                match **r {
                    SetExpr::Leaf(_) => write!(f, "{r}"),
                    _ => write!(f, "({r})"),
                }
            }
        }
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    _src: &'a str,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or_else(|| self.chars.last().map_or(0, |c| c.0 + 1), |c| c.0)
    }

    fn fail<T>(&self, message: &str) -> Result<T, SetExprError> {
        Err(SetExprError::Syntax { at: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<SetExpr, SetExprError> {
        let mut lhs = self.atom()?;
        loop {
            let op = match self.peek() {
                Some('&') | Some('∩') => SetOp::Intersection,
                Some('|') | Some('∪') => SetOp::Union,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.atom()?;
            lhs = SetExpr::Node(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn atom(&mut self) -> Result<SetExpr, SetExprError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return self.fail("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut v: usize = 0;
                while let Some(d) = self.chars.get(self.pos).and_then(|c| c.1.to_digit(10)) {
                    v = v.saturating_mul(10).saturating_add(d as usize);
                    self.pos += 1;
                }
                Ok(SetExpr::Leaf(v))
            }
            Some(_) => self.fail("expected a constraint index or '('"),
            None => self.fail("unexpected end of expression"),
        }
    }
}

impl FromStr for SetExpr {
    type Err = SetExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { chars: s.char_indices().collect(), pos: 0, _src: s };
        let e = p.expr()?;
        if p.peek().is_some() {
            return p.fail("trailing input");
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parses_left_associative_chain() {
        let e: SetExpr = "1 | 2 & 3".parse().unwrap();
        assert_eq!(e, SetExpr::chain(&[SetOp::Union, SetOp::Intersection]));
        assert_eq!(e.flat_ops(), Some(vec![SetOp::Union, SetOp::Intersection]));
    }

    #[test]
    fn parses_brackets() {
        let e: SetExpr = "(1 | 2) & (3 ∪ 4)".parse().unwrap();
        let want = SetExpr::leaf(1).or(SetExpr::leaf(2)).and(SetExpr::leaf(3).or(SetExpr::leaf(4)));
        assert_eq!(e, want);
        assert_eq!(e.flat_ops(), None);
        assert_eq!(e.to_string(), "1 | 2 & (3 | 4)");
        assert_eq!(e.to_string().parse::<SetExpr>().unwrap(), e);
    }

    #[test]
    fn single_leaf_is_flat() {
        let e: SetExpr = "1".parse().unwrap();
        assert_eq!(e.flat_ops(), Some(vec![]));
        assert!(e.validate(1).is_ok());
    }

    #[test]
    fn out_of_order_chain_is_not_flat() {
        let e: SetExpr = "2 & 1".parse().unwrap();
        assert_eq!(e.flat_ops(), None);
        assert!(e.validate(2).is_ok());
    }

    #[test]
    fn validation_errors() {
        let e: SetExpr = "1 & 1".parse().unwrap();
        assert_eq!(e.validate(2), Err(SetExprError::LeafRepeated(1)));
        let e: SetExpr = "1 & 3".parse().unwrap();
        assert_eq!(e.validate(2), Err(SetExprError::LeafOutOfRange { leaf: 3, count: 2 }));
        let e: SetExpr = "1".parse().unwrap();
        assert_eq!(e.validate(2), Err(SetExprError::LeafMissing(2)));
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "1 &", "(1 | 2", "1 2", "a", "1 & ()"] {
            assert!(matches!(bad.parse::<SetExpr>(), Err(SetExprError::Syntax { .. })), "{bad}");
        }
    }

    #[test]
    fn evaluates() {
        let e: SetExpr = "(1 | 2) & 3".parse().unwrap();
        assert!(e.eval(&|i| i != 1));
        assert!(!e.eval(&|i| i == 3));
    }
}
