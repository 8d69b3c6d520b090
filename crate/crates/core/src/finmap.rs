//! Maps between finite sets `{1..n}`.
//!
//! All indices are 1-based. A [`FinMap`] is a total table; the empty set is
//! the object `0` and the unique map out of it has an empty table.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinMap {
    dom: usize,
    cod: usize,
    table: Vec<usize>,
}

impl FinMap {
    pub fn new(cod: usize, table: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = table.iter().find(|&&v| v == 0 || v > cod) {
            return Err(Error::FinMap(format!("entry {bad} outside 1..={cod}")));
        }
        Ok(FinMap {
            dom: table.len(),
            cod,
            table,
        })
    }

    pub fn identity(n: usize) -> Self {
        FinMap {
            dom: n,
            cod: n,
            table: (1..=n).collect(),
        }
    }

    pub fn empty(cod: usize) -> Self {
        FinMap {
            dom: 0,
            cod,
            table: Vec::new(),
        }
    }

    /// The injection `{1..n} -> {1..cod}` shifting every index by `offset`.
    pub fn shift(n: usize, offset: usize, cod: usize) -> Self {
        FinMap {
            dom: n,
            cod,
            table: (1..=n).map(|i| i + offset).collect(),
        }
    }

    pub fn dom_size(&self) -> usize {
        self.dom
    }

    pub fn cod_size(&self) -> usize {
        self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Image of `i` (1-based).
    pub fn apply(&self, i: usize) -> usize {
        self.table[i - 1]
    }

    /// `g ∘ self`: first `self`, then `g`.
    pub fn then(&self, g: &FinMap) -> Result<FinMap> {
        compose(self, g)
    }

    pub fn is_bijection(&self) -> bool {
        is_bijection(self)
    }

    pub fn inverse(&self) -> Option<FinMap> {
        if !self.is_bijection() {
            return None;
        }
        let mut table = vec![0; self.dom];
        for (i, &v) in self.table.iter().enumerate() {
            table[v - 1] = i + 1;
        }
        Some(FinMap {
            dom: self.cod,
            cod: self.dom,
            table,
        })
    }
}

/// Composite that applies `f` first: `result[i] = g[f[i]]`.
pub fn compose(f: &FinMap, g: &FinMap) -> Result<FinMap> {
    if f.cod != g.dom {
        return Err(Error::Composition {
            left: f.cod,
            right: g.dom,
        });
    }
    Ok(FinMap {
        dom: f.dom,
        cod: g.cod,
        table: f.table.iter().map(|&i| g.table[i - 1]).collect(),
    })
}

/// Places the maps side by side, left to right, offsetting both domain and
/// codomain blocks.
pub fn juxtapose(gs: &[FinMap]) -> FinMap {
    let mut table = Vec::with_capacity(gs.iter().map(|g| g.dom).sum());
    let mut offset = 0;
    for g in gs {
        table.extend(g.table.iter().map(|&v| v + offset));
        offset += g.cod;
    }
    FinMap {
        dom: table.len(),
        cod: offset,
        table,
    }
}

/// The block map `f̄` induced by `f: {1..k} -> {1..ℓ}` and block sizes
/// `n_1..n_ℓ`. Source block `i` has size `n_{f(i)}` and is sent onto target
/// block `f(i)` in order.
pub fn block_map(f: &FinMap, arities: &[usize]) -> Result<FinMap> {
    if f.cod != arities.len() {
        return Err(Error::FinMap(format!(
            "block map needs {} arities, got {}",
            f.cod,
            arities.len()
        )));
    }
    let mut starts = Vec::with_capacity(arities.len());
    let mut acc = 0;
    for &n in arities {
        starts.push(acc);
        acc += n;
    }
    let mut table = Vec::new();
    for &target in &f.table {
        let start = starts[target - 1];
        table.extend((1..=arities[target - 1]).map(|j| start + j));
    }
    Ok(FinMap {
        dom: table.len(),
        cod: acc,
        table,
    })
}

pub fn is_bijection(f: &FinMap) -> bool {
    if f.dom != f.cod {
        return false;
    }
    let mut seen = vec![false; f.cod];
    for &v in &f.table {
        if std::mem::replace(&mut seen[v - 1], true) {
            return false;
        }
    }
    true
}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.table.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]:{}->{}", self.dom, self.cod)
    }
}

/// Parses `[a,b,c]:m->n`. The `:m->n` suffix may be omitted, in which case
/// the codomain is the largest entry.
impl FromStr for FinMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed map `{s}`, expected `[a,b]:m->n`"));
        let s = s.trim();
        let close = s.find(']').ok_or_else(bad)?;
        let body = s.strip_prefix('[').ok_or_else(bad)?;
        let entries = &body[..close - 1];
        let table: Vec<usize> = if entries.trim().is_empty() {
            Vec::new()
        } else {
            entries
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        let rest = s[close + 1..].trim();
        let cod = if rest.is_empty() {
            table.iter().copied().max().unwrap_or(0)
        } else {
            let rest = rest.strip_prefix(':').ok_or_else(bad)?;
            let (m, n) = rest.split_once("->").ok_or_else(bad)?;
            let m: usize = m.trim().parse().map_err(|_| bad())?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            if m != table.len() {
                return Err(Error::Parse(format!(
                    "map `{s}` declares domain {m} but has {} entries",
                    table.len()
                )));
            }
            n
        };
        FinMap::new(cod, table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> FinMap {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        let f = m("[3,1,2]:3->3");
        assert_eq!(compose(&FinMap::identity(3), &f).unwrap(), f);
        assert_eq!(
            compose(&m("[2,1]:2->2"), &m("[2,1]:2->2")).unwrap(),
            FinMap::identity(2)
        );
        assert_eq!(
            compose(&m("[1,1]:2->1"), &m("[2]:1->2")).unwrap(),
            m("[2,2]:2->2")
        );
        assert!(matches!(
            compose(&m("[1]:1->1"), &FinMap::identity(2)),
            Err(Error::Composition { .. })
        ));
    }

    #[test]
    fn juxtapose_examples() {
        assert_eq!(juxtapose(&[]), FinMap::empty(0));
        let g = m("[2]:1->2");
        assert_eq!(juxtapose(std::slice::from_ref(&g)), g);
        assert_eq!(
            juxtapose(&[m("[2]:1->2"), m("[1,1]:2->1")]),
            m("[2,3,3]:3->3")
        );
    }

    #[test]
    fn block_map_examples() {
        assert_eq!(
            block_map(&FinMap::identity(2), &[2, 3]).unwrap(),
            FinMap::identity(5)
        );
        assert_eq!(
            block_map(&m("[2,1]:2->2"), &[2, 3]).unwrap(),
            m("[3,4,5,1,2]:5->5")
        );
        assert_eq!(
            block_map(&m("[1,1]:2->1"), &[2]).unwrap(),
            m("[1,2,1,2]:4->2")
        );
        assert!(block_map(&m("[1,1]:2->1"), &[2, 2]).is_err());
    }

    #[test]
    fn bijections() {
        assert!(is_bijection(&FinMap::identity(4)));
        assert!(!is_bijection(&m("[1,1]:2->2")));
        assert!(is_bijection(&m("[2,3,1]:3->3")));
        assert!(is_bijection(&FinMap::empty(0)));
        let c = m("[2,3,1]:3->3");
        assert_eq!(
            compose(&c, &c.inverse().unwrap()).unwrap(),
            FinMap::identity(3)
        );
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(m("[]:0->0"), FinMap::empty(0));
        assert_eq!(m("[2,1]").to_string(), "[2,1]:2->2");
        assert!("[0]:1->1".parse::<FinMap>().is_err());
        assert!("[1,2]:3->2".parse::<FinMap>().is_err());
        assert!("1,2".parse::<FinMap>().is_err());
    }
}
