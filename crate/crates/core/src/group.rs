//! Exact arithmetic for grading groups.
//!
//! Supported kinds: finite cyclic `Z<m>`, the infinite cyclic group `Z`,
//! finite direct products, and arbitrary finite groups given by a Cayley
//! table loaded from a file. Elements carry a canonical encoding so that
//! equal elements compare equal bitwise; all containers keyed on elements
//! use the derived total order.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest Cayley table we are willing to axiom-check (O(m^3)).
pub const MAX_TABLE_ORDER: usize = 64;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("invalid group spec `{spec}`: {reason}")]
    Spec { spec: String, reason: String },
    #[error("cayley table at `{path}`: {reason}")]
    Table { path: String, reason: String },
    #[error("cannot parse `{literal}` as an element of {group}")]
    ElementParse { literal: String, group: String },
    #[error("element does not belong to this group")]
    ForeignElement,
    #[error("segment indices out of range: i={i}, k={k}, tuple length {len}")]
    SegmentRange { i: usize, k: usize, len: usize },
    #[error("group is infinite; this operation requires a finite group")]
    InfiniteGroup,
}

/// Canonical encoding of a group element within its parent [`Group`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupElement {
    /// Residue in a finite cyclic group, always reduced to `0..m`.
    Residue(u64),
    /// Arbitrary-precision integer in the infinite cyclic group.
    Int(BigInt),
    /// Componentwise element of a direct product.
    Tuple(Vec<GroupElement>),
    /// Index into the element list of a Cayley-table group.
    Index(usize),
}

/// A finite group presented by its multiplication table.
#[derive(Debug, Clone, PartialEq)]
pub struct CayleyTable {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    source: String,
}

#[derive(Deserialize)]
struct TableFile {
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl CayleyTable {
    /// Builds a table group, verifying all group axioms eagerly.
    pub fn new(
        names: Vec<String>,
        table: Vec<Vec<usize>>,
        identity: usize,
        source: String,
    ) -> Result<Self, GroupError> {
        let err = |reason: String| GroupError::Table {
            path: source.clone(),
            reason,
        };
        let m = names.len();
        if m == 0 {
            return Err(err("empty element list".into()));
        }
        if m > MAX_TABLE_ORDER {
            return Err(err(format!("order {m} exceeds the cap {MAX_TABLE_ORDER}")));
        }
        if names.iter().collect::<BTreeSet<_>>().len() != m {
            return Err(err("duplicate element names".into()));
        }
        if table.len() != m || table.iter().any(|row| row.len() != m) {
            return Err(err(format!("table must be {m}x{m}")));
        }
        if table.iter().flatten().any(|&x| x >= m) {
            return Err(err("table entry out of range (closure failure)".into()));
        }
        if identity >= m {
            return Err(err("identity index out of range".into()));
        }
        for a in 0..m {
            if table[identity][a] != a || table[a][identity] != a {
                return Err(err(format!(
                    "`{}` is not a two-sided identity",
                    names[identity]
                )));
            }
        }
        let mut inverses = vec![usize::MAX; m];
        for a in 0..m {
            match (0..m).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => inverses[a] = b,
                None => return Err(err(format!("`{}` has no two-sided inverse", names[a]))),
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(err(format!(
                            "associativity fails at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(Self {
            names,
            table,
            identity,
            inverses,
            source,
        })
    }

    /// Loads and axiom-checks a table from a JSON document with keys
    /// `elements`, `table`, `identity`.
    pub fn load(path: &str) -> Result<Self, GroupError> {
        let text = std::fs::read_to_string(Path::new(path)).map_err(|e| GroupError::Table {
            path: path.to_string(),
            reason: e.to_string(),
        })?;
        let parsed: TableFile =
            serde_json::from_str(&text).map_err(|e| GroupError::Table {
                path: path.to_string(),
                reason: format!("malformed document: {e}"),
            })?;
        Self::new(parsed.elements, parsed.table, parsed.identity, path.to_string())
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }
}

/// A grading group with explicit product, inverse and identity.
#[derive(Debug, Clone, PartialEq)]
pub enum Group {
    /// Finite cyclic group of order `m >= 1`, written additively.
    Cyclic(u64),
    /// The integers under addition.
    InfiniteCyclic,
    /// Direct product of the component groups.
    Product(Vec<Group>),
    /// Finite group given by an axiom-checked Cayley table.
    Table(CayleyTable),
}

impl Group {
    /// Parses a group spec: `Z` | `Z<m>` | specs joined by `x` |
    /// `table:<path>`. Table specs stand alone and cannot be combined
    /// in products.
    pub fn parse_spec(spec: &str) -> Result<Self, GroupError> {
        let spec = spec.trim();
        let bad = |reason: &str| GroupError::Spec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        if spec.is_empty() {
            return Err(bad("empty spec"));
        }
        if let Some(path) = spec.strip_prefix("table:") {
            if path.is_empty() {
                return Err(bad("missing table path"));
            }
            return Ok(Group::Table(CayleyTable::load(path)?));
        }
        let parts: Vec<&str> = spec.split('x').collect();
        let mut groups = Vec::with_capacity(parts.len());
        for part in &parts {
            groups.push(Self::parse_atom(part.trim(), spec)?);
        }
        if groups.len() == 1 {
            Ok(groups.pop().expect("one part"))
        } else {
            Ok(Group::Product(groups))
        }
    }

    fn parse_atom(part: &str, whole: &str) -> Result<Self, GroupError> {
        let bad = |reason: String| GroupError::Spec {
            spec: whole.to_string(),
            reason,
        };
        if part == "Z" {
            return Ok(Group::InfiniteCyclic);
        }
        if let Some(digits) = part.strip_prefix('Z') {
            let m: i64 = digits
                .parse()
                .map_err(|_| bad(format!("`{part}` is not `Z` or `Z<m>`")))?;
            if m <= 0 {
                return Err(bad(format!("cyclic order must be >= 1, got {m}")));
            }
            return Ok(Group::Cyclic(m as u64));
        }
        Err(bad(format!("unrecognized component `{part}`")))
    }

    /// The canonical spec string; `parse_spec` round-trips it.
    pub fn spec_string(&self) -> String {
        match self {
            Group::Cyclic(m) => format!("Z{m}"),
            Group::InfiniteCyclic => "Z".to_string(),
            Group::Product(parts) => parts
                .iter()
                .map(Group::spec_string)
                .collect::<Vec<_>>()
                .join("x"),
            Group::Table(t) => format!("table:{}", t.source),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            Group::Cyclic(_) => GroupElement::Residue(0),
            Group::InfiniteCyclic => GroupElement::Int(BigInt::from(0)),
            Group::Product(parts) => {
                GroupElement::Tuple(parts.iter().map(Group::identity).collect())
            }
            Group::Table(t) => GroupElement::Index(t.identity),
        }
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u128> {
        match self {
            Group::Cyclic(m) => Some(*m as u128),
            Group::InfiniteCyclic => None,
            Group::Product(parts) => parts
                .iter()
                .map(Group::order)
                .try_fold(1u128, |acc, o| o.map(|o| acc * o)),
            Group::Table(t) => Some(t.order() as u128),
        }
    }

    /// True when `g` is a valid canonical element of this group.
    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (Group::Cyclic(m), GroupElement::Residue(v)) => v < m,
            (Group::InfiniteCyclic, GroupElement::Int(_)) => true,
            (Group::Product(parts), GroupElement::Tuple(comps)) => {
                parts.len() == comps.len()
                    && parts.iter().zip(comps).all(|(p, c)| p.contains(c))
            }
            (Group::Table(t), GroupElement::Index(i)) => *i < t.order(),
            _ => false,
        }
    }

    /// Group product `gh`.
    pub fn op(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        if !self.contains(g) || !self.contains(h) {
            return Err(GroupError::ForeignElement);
        }
        Ok(self.op_unchecked(g, h))
    }

    fn op_unchecked(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        match (self, g, h) {
            (Group::Cyclic(m), GroupElement::Residue(a), GroupElement::Residue(b)) => {
                GroupElement::Residue((a + b) % m)
            }
            (Group::InfiniteCyclic, GroupElement::Int(a), GroupElement::Int(b)) => {
                GroupElement::Int(a + b)
            }
            (Group::Product(parts), GroupElement::Tuple(a), GroupElement::Tuple(b)) => {
                GroupElement::Tuple(
                    parts
                        .iter()
                        .zip(a.iter().zip(b))
                        .map(|(p, (x, y))| p.op_unchecked(x, y))
                        .collect(),
                )
            }
            (Group::Table(t), GroupElement::Index(a), GroupElement::Index(b)) => {
                GroupElement::Index(t.table[*a][*b])
            }
            _ => unreachable!("contains() guards the shapes"),
        }
    }

    /// Two-sided inverse of `g`.
    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        if !self.contains(g) {
            return Err(GroupError::ForeignElement);
        }
        Ok(match (self, g) {
            (Group::Cyclic(m), GroupElement::Residue(a)) => {
                GroupElement::Residue(if *a == 0 { 0 } else { m - a })
            }
            (Group::InfiniteCyclic, GroupElement::Int(a)) => GroupElement::Int(-a),
            (Group::Product(parts), GroupElement::Tuple(comps)) => GroupElement::Tuple(
                parts
                    .iter()
                    .zip(comps)
                    .map(|(p, c)| p.inverse(c).expect("component validated"))
                    .collect(),
            ),
            (Group::Table(t), GroupElement::Index(a)) => GroupElement::Index(t.inverses[*a]),
            _ => unreachable!(),
        })
    }

    /// Ordered product `t[i] t[i+1] ... t[i+k-1]` of consecutive tuple
    /// entries, 1-based. `k = 0` yields the identity.
    pub fn segment_product(
        &self,
        tuple: &[GroupElement],
        i: usize,
        k: usize,
    ) -> Result<GroupElement, GroupError> {
        if i < 1 || i + k - 1 > tuple.len() && k > 0 || (k == 0 && i > tuple.len() + 1) {
            return Err(GroupError::SegmentRange {
                i,
                k,
                len: tuple.len(),
            });
        }
        let mut acc = self.identity();
        for g in &tuple[i - 1..i - 1 + k] {
            acc = self.op(&acc, g)?;
        }
        Ok(acc)
    }

    /// All elements in canonical (enumeration) order; errors for
    /// infinite groups.
    pub fn elements(&self) -> Result<Vec<GroupElement>, GroupError> {
        match self {
            Group::Cyclic(m) => Ok((0..*m).map(GroupElement::Residue).collect()),
            Group::InfiniteCyclic => Err(GroupError::InfiniteGroup),
            Group::Product(parts) => {
                let component_elems = parts
                    .iter()
                    .map(Group::elements)
                    .collect::<Result<Vec<_>, _>>()?;
                let mut out = vec![Vec::new()];
                for elems in &component_elems {
                    let mut next = Vec::with_capacity(out.len() * elems.len());
                    for prefix in &out {
                        for e in elems {
                            let mut t = prefix.clone();
                            t.push(e.clone());
                            next.push(t);
                        }
                    }
                    out = next;
                }
                Ok(out.into_iter().map(GroupElement::Tuple).collect())
            }
            Group::Table(t) => Ok((0..t.order()).map(GroupElement::Index).collect()),
        }
    }

    /// Parses one element literal: an integer for cyclic groups
    /// (reduced), an integer for `Z`, `(a,b,...)` for products, an
    /// element name for table groups.
    pub fn parse_element(&self, literal: &str) -> Result<GroupElement, GroupError> {
        let literal = literal.trim();
        let bad = || GroupError::ElementParse {
            literal: literal.to_string(),
            group: self.spec_string(),
        };
        match self {
            Group::Cyclic(m) => {
                let v = i128::from_str(literal).map_err(|_| bad())?;
                Ok(GroupElement::Residue(v.rem_euclid(*m as i128) as u64))
            }
            Group::InfiniteCyclic => {
                Ok(GroupElement::Int(BigInt::from_str(literal).map_err(|_| bad())?))
            }
            Group::Product(parts) => {
                let inner = literal
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(bad)?;
                let pieces = split_top_level(inner);
                if pieces.len() != parts.len() {
                    return Err(bad());
                }
                Ok(GroupElement::Tuple(
                    parts
                        .iter()
                        .zip(pieces)
                        .map(|(p, s)| p.parse_element(s))
                        .collect::<Result<_, _>>()?,
                ))
            }
            Group::Table(t) => t
                .names
                .iter()
                .position(|n| n == literal)
                .map(GroupElement::Index)
                .ok_or_else(bad),
        }
    }

    /// Canonical text form of an element; `parse_element` round-trips it.
    pub fn format_element(&self, g: &GroupElement) -> String {
        match (self, g) {
            (Group::Cyclic(_), GroupElement::Residue(v)) => v.to_string(),
            (Group::InfiniteCyclic, GroupElement::Int(v)) => v.to_string(),
            (Group::Product(parts), GroupElement::Tuple(comps)) => {
                let mut s = String::from("(");
                for (idx, (p, c)) in parts.iter().zip(comps).enumerate() {
                    if idx > 0 {
                        s.push(',');
                    }
                    let _ = write!(s, "{}", p.format_element(c));
                }
                s.push(')');
                s
            }
            (Group::Table(t), GroupElement::Index(i)) => t.names[*i].clone(),
            _ => format!("{g:?}"),
        }
    }

    /// Parses a comma-separated tuple literal, splitting only at
    /// top-level commas so product literals like `(1,0),(0,3)` work.
    pub fn parse_tuple(&self, literal: &str) -> Result<Vec<GroupElement>, GroupError> {
        let literal = literal.trim();
        if literal.is_empty() {
            return Ok(Vec::new());
        }
        split_top_level(literal)
            .into_iter()
            .map(|s| self.parse_element(s))
            .collect()
    }

    pub fn format_tuple(&self, tuple: &[GroupElement]) -> String {
        tuple
            .iter()
            .map(|g| self.format_element(g))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Splits on commas not nested inside parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (idx, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(s[start..idx].trim());
                start = idx + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}
