//! Persistent stacks of naturals, head first.
//!
//! A [`Stack`] is a shared cons list, so the successor of a state reuses
//! every cell below the rewritten prefix. Recording a whole evaluation
//! therefore costs a constant amount of memory per step.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::hash::{Hash, Hasher};
use core::str::FromStr;

use crate::nat::{Nat, ParseNatError};

struct Cell {
    value: Nat,
    next: Option<Arc<Cell>>,
}

/// A finite sequence of [`Nat`], written `x1 # x2 # ... # []`.
#[derive(Clone, Default)]
pub struct Stack {
    top: Option<Arc<Cell>>,
    len: usize,
}

impl Stack {
    pub const fn new() -> Self {
        Stack { top: None, len: 0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `value # self`.
    pub fn cons(&self, value: Nat) -> Stack {
        Stack {
            top: Some(Arc::new(Cell {
                value,
                next: self.top.clone(),
            })),
            len: self.len + 1,
        }
    }

    pub fn head(&self) -> Option<&Nat> {
        self.top.as_deref().map(|c| &c.value)
    }

    /// Everything below the head; the empty stack is its own tail.
    pub fn tail(&self) -> Stack {
        match &self.top {
            Some(c) => Stack {
                top: c.next.clone(),
                len: self.len - 1,
            },
            None => Stack::new(),
        }
    }

    pub fn split_first(&self) -> Option<(&Nat, Stack)> {
        self.head().map(|h| (h, self.tail()))
    }

    /// The stack with its first `k` elements removed.
    pub fn drop_front(&self, k: usize) -> Stack {
        let mut s = self.clone();
        for _ in 0..k.min(self.len) {
            s = s.tail();
        }
        s
    }

    pub fn get(&self, index: usize) -> Option<&Nat> {
        self.iter().nth(index)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            cell: self.top.as_deref(),
        }
    }

    /// Pushes `prefix` (head first) on top of `self`.
    pub fn prepend<I>(&self, prefix: I) -> Stack
    where
        I: IntoIterator<Item = Nat>,
        I::IntoIter: DoubleEndedIterator,
    {
        prefix
            .into_iter()
            .rev()
            .fold(self.clone(), |s, v| s.cons(v))
    }

    pub fn to_vec(&self) -> Vec<Nat> {
        self.iter().cloned().collect()
    }

    /// Every stack of length at most `max_len` with elements at most
    /// `max_elem`, shortest first, then lexicographically head first.
    pub fn all_up_to(max_len: usize, max_elem: u64) -> Vec<Stack> {
        let mut out = alloc::vec![Stack::new()];
        let mut layer: Vec<Vec<u64>> = alloc::vec![Vec::new()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|s| {
                    (0..=max_elem).map(move |e| {
                        let mut t = s.clone();
                        t.push(e);
                        t
                    })
                })
                .collect();
            out.extend(layer.iter().map(|v| Stack::from(v.as_slice())));
        }
        out
    }

    /// True when both stacks are the same allocation (or both empty).
    pub fn ptr_eq(&self, other: &Stack) -> bool {
        match (&self.top, &other.top) {
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            (None, None) => true,
            _ => false,
        }
    }
}

impl Drop for Stack {
    // Iterative, so dropping a long unshared list cannot overflow the call stack.
    fn drop(&mut self) {
        let mut next = self.top.take();
        while let Some(cell) = next {
            match Arc::try_unwrap(cell) {
                Ok(mut owned) => next = owned.next.take(),
                Err(_) => break,
            }
        }
    }
}

pub struct Iter<'a> {
    cell: Option<&'a Cell>,
}

impl<'a> Iterator for Iter<'a> {
    type Item = &'a Nat;

    fn next(&mut self) -> Option<&'a Nat> {
        let c = self.cell?;
        self.cell = c.next.as_deref();
        Some(&c.value)
    }
}

impl<'a> IntoIterator for &'a Stack {
    type Item = &'a Nat;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl FromIterator<Nat> for Stack {
    fn from_iter<T: IntoIterator<Item = Nat>>(iter: T) -> Self {
        let items: Vec<Nat> = iter.into_iter().collect();
        Stack::new().prepend(items)
    }
}

impl From<Vec<Nat>> for Stack {
    fn from(items: Vec<Nat>) -> Self {
        Stack::new().prepend(items)
    }
}

impl<const N: usize> From<[u64; N]> for Stack {
    fn from(items: [u64; N]) -> Self {
        items.into_iter().map(Nat::from).collect()
    }
}

impl From<&[u64]> for Stack {
    fn from(items: &[u64]) -> Self {
        items.iter().copied().map(Nat::from).collect()
    }
}

impl PartialEq for Stack {
    fn eq(&self, other: &Self) -> bool {
        if self.len != other.len {
            return false;
        }
        let (mut a, mut b) = (self.top.as_ref(), other.top.as_ref());
        loop {
            match (a, b) {
                (Some(x), Some(y)) => {
                    if Arc::ptr_eq(x, y) {
                        return true;
                    }
                    if x.value != y.value {
                        return false;
                    }
                    a = x.next.as_ref();
                    b = y.next.as_ref();
                }
                (None, None) => return true,
                _ => return false,
            }
        }
    }
}

impl Eq for Stack {}

impl Hash for Stack {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_usize(self.len);
        for v in self {
            v.hash(state);
        }
    }
}

impl PartialOrd for Stack {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Stack {
    /// Lexicographic, head first.
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Display for Stack {
    /// Space-separated, head first; the empty stack renders as nothing.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            fmt::Display::fmt(v, f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

impl FromStr for Stack {
    type Err = ParseNatError;

    /// Whitespace-separated decimals, head first. Blank input is the empty stack.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace()
            .map(str::parse::<Nat>)
            .collect::<Result<Vec<_>, _>>()
            .map(Stack::from)
    }
}
