//! Finite groups as Cayley tables, subgroups and conjugation.
//!
//! Elements are dense indices `0..order`. Permutation groups compose with the
//! right factor applied first: `(s * t)(i) = s(t(i))`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

/// Index of a group element.
pub type Elem = u16;

/// Default cap on the order of builtin groups.
pub const DEFAULT_ORDER_CAP: usize = 48;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cayley table line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("group axiom `{axiom}` fails at {witness:?}")]
    Axiom { axiom: &'static str, witness: Vec<usize> },
    #[error("group order {order} exceeds cap {cap}")]
    OrderCap { order: usize, cap: usize },
    #[error("unknown group spec `{0}`")]
    UnknownSpec(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("io error reading {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    order: usize,
    cayley: Vec<Elem>,
    identity: Elem,
    inverse: Vec<Elem>,
    names: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={}, names={:?})", self.order, self.names)
    }
}

impl FiniteGroup {
    /// Builds a group from a full Cayley table, checking every axiom.
    ///
    /// `table[g][h]` is the index of `g·h`. When `names` is `None` elements are
    /// named by their index.
    pub fn from_table(table: &[Vec<usize>], names: Option<Vec<String>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Parse { line: 1, msg: "order must be positive".into() });
        }
        if n > Elem::MAX as usize {
            return Err(GroupError::OrderCap { order: n, cap: Elem::MAX as usize });
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::Parse {
                    line: g + 2,
                    msg: format!("expected {n} entries, found {}", row.len()),
                });
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(GroupError::Parse { line: g + 2, msg: format!("entry {bad} out of range 0..{n}") });
            }
        }
        for g in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for h in 0..n {
                if std::mem::replace(&mut seen_row[table[g][h]], true) {
                    return Err(GroupError::Axiom { axiom: "row is a permutation", witness: vec![g] });
                }
                if std::mem::replace(&mut seen_col[table[h][g]], true) {
                    return Err(GroupError::Axiom { axiom: "column is a permutation", witness: vec![g] });
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::Axiom { axiom: "identity", witness: vec![] })?;
        let mut inverse = vec![0 as Elem; n];
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or(GroupError::Axiom { axiom: "inverse", witness: vec![g] })?;
            inverse[g] = inv as Elem;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::Axiom { axiom: "associativity", witness: vec![a, b, c] });
                    }
                }
            }
        }
        let names = match names {
            Some(names) => {
                if names.len() != n {
                    return Err(GroupError::Parse {
                        line: n + 2,
                        msg: format!("expected {n} names, found {}", names.len()),
                    });
                }
                let distinct: BTreeSet<&String> = names.iter().collect();
                if distinct.len() != n {
                    return Err(GroupError::Parse { line: n + 2, msg: "duplicate element names".into() });
                }
                names
            }
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(Self {
            order: n,
            cayley: table.iter().flatten().map(|&x| x as Elem).collect(),
            identity: identity as Elem,
            inverse,
            names,
        })
    }

    /// Parses the Cayley-table file format: the order on the first line, then
    /// one row of space-separated indices per element, then an optional line of
    /// names.
    pub fn parse_table(text: &str) -> Result<Self, GroupError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(GroupError::Parse { line: 1, msg: "empty file".into() })?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| GroupError::Parse { line: 1, msg: format!("expected order, found `{}`", first.trim()) })?;
        let mut table = Vec::with_capacity(n);
        for row in 0..n {
            let (idx, line) =
                lines.next().ok_or(GroupError::Parse { line: row + 2, msg: "missing table row".into() })?;
            let entries = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| GroupError::Parse { line: idx + 1, msg: format!("bad index `{tok}`") })
                })
                .collect::<Result<Vec<_>, _>>()?;
            table.push(entries);
        }
        let names = lines.next().map(|(_, l)| l.split_whitespace().map(str::to_owned).collect::<Vec<_>>());
        if let Some((idx, _)) = lines.next() {
            return Err(GroupError::Parse { line: idx + 1, msg: "trailing content".into() });
        }
        Self::from_table(&table, names)
    }

    pub fn read_table(path: &Path) -> Result<Self, GroupError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GroupError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        Self::parse_table(&text)
    }

    /// Renders the group in the Cayley-table file format.
    pub fn to_table_string(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for g in self.elements() {
            let row: Vec<String> = self.elements().map(|h| self.mul(g, h).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out.push_str(&self.names.join(" "));
        out.push('\n');
        out
    }

    pub fn cyclic(n: usize) -> Self {
        let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::from_table(&table, None).expect("cyclic table is a group")
    }

    /// Dihedral group of the regular `n`-gon, order `2n`. Index `k + n·f` is `r^k s^f`.
    pub fn dihedral(n: usize) -> Self {
        let order = 2 * n;
        let split = |x: usize| (x % n, x / n);
        let table: Vec<Vec<usize>> = (0..order)
            .map(|x| {
                let (a, f) = split(x);
                (0..order)
                    .map(|y| {
                        let (b, g) = split(y);
                        let rot = if f == 0 { (a + b) % n } else { (a + n - b) % n };
                        rot + n * ((f + g) % 2)
                    })
                    .collect()
            })
            .collect();
        let names = (0..order)
            .map(|x| {
                let (k, f) = split(x);
                let rot = match k {
                    0 => String::new(),
                    1 => "r".to_owned(),
                    _ => format!("r^{k}"),
                };
                match (rot.is_empty(), f) {
                    (true, 0) => "e".to_owned(),
                    (_, 0) => rot,
                    (_, _) => format!("{rot}s"),
                }
            })
            .collect();
        Self::from_table(&table, Some(names)).expect("dihedral table is a group")
    }

    /// Symmetric group on `n` points. Elements are ordered by number of moved
    /// points, then by canonical cycle notation; for `n = 3` this gives
    /// `e, (12), (13), (23), (123), (132)`.
    pub fn symmetric(n: usize) -> Self {
        let mut perms = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        permutations(&mut current, 0, &mut perms);
        let mut keyed: Vec<(usize, Vec<Vec<usize>>, Vec<usize>)> = perms
            .into_iter()
            .map(|p| {
                let moved = p.iter().enumerate().filter(|(i, &x)| *i != x).count();
                (moved, cycles(&p), p)
            })
            .collect();
        keyed.sort();
        let index_of = |p: &[usize]| keyed.iter().position(|(_, _, q)| q == p).expect("permutation listed");
        let table: Vec<Vec<usize>> = keyed
            .iter()
            .map(|(_, _, s)| {
                keyed
                    .iter()
                    .map(|(_, _, t)| {
                        let composed: Vec<usize> = (0..n).map(|i| s[t[i]]).collect();
                        index_of(&composed)
                    })
                    .collect()
            })
            .collect();
        let names = keyed
            .iter()
            .map(|(_, cyc, _)| {
                if cyc.is_empty() {
                    "e".to_owned()
                } else {
                    cyc.iter()
                        .map(|c| format!("({})", c.iter().map(|i| (i + 1).to_string()).collect::<String>()))
                        .collect()
                }
            })
            .collect();
        Self::from_table(&table, Some(names)).expect("symmetric table is a group")
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}` indexed `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Self {
        // unit products for 1, i, j, k as (sign, unit)
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let table: Vec<Vec<usize>> = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (neg, unit) = UNIT[x / 2][y / 2];
                        let sign = (x % 2 == 1) ^ (y % 2 == 1) ^ neg;
                        2 * unit + usize::from(sign)
                    })
                    .collect()
            })
            .collect();
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].map(str::to_owned).to_vec();
        Self::from_table(&table, Some(names)).expect("quaternion table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.cayley[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a as usize]
    }

    /// `g⁻¹·h·g`.
    #[inline]
    pub fn conjugate(&self, g: Elem, h: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), h), g)
    }

    /// Product of a sequence, left to right.
    pub fn product<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order as Elem).into_iter()
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Resolves an element by display name, falling back to a numeric index.
    pub fn element(&self, token: &str) -> Result<Elem, GroupError> {
        let token = token.trim();
        if let Some(i) = self.names.iter().position(|n| n == token) {
            return Ok(i as Elem);
        }
        match token.parse::<usize>() {
            Ok(i) if i < self.order => Ok(i as Elem),
            _ => Err(GroupError::UnknownElement(token.to_owned())),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// First `(a, b, c)` with `(ab)c ≠ a(bc)`, scanning every triple.
    pub fn associativity_witness(&self) -> Option<[Elem; 3]> {
        for a in self.elements() {
            for b in self.elements() {
                let ab = self.mul(a, b);
                for c in self.elements() {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some([a, b, c]);
                    }
                }
            }
        }
        None
    }
}

fn permutations(current: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == current.len() {
        out.push(current.clone());
        return;
    }
    for i in k..current.len() {
        current.swap(k, i);
        permutations(current, k + 1, out);
        current.swap(k, i);
    }
}

fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p[x];
        }
        out.push(cycle);
    }
    out
}

/// A group named by a builtin family or a Cayley-table file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Quaternion,
    File(String),
}

impl GroupSpec {
    fn builtin_order(&self) -> Option<usize> {
        match *self {
            GroupSpec::Cyclic(n) => Some(n),
            GroupSpec::Dihedral(n) => Some(2 * n),
            GroupSpec::Symmetric(n) => Some((1..=n).product()),
            GroupSpec::Quaternion => Some(8),
            GroupSpec::File(_) => None,
        }
    }

    /// Builds the group, refusing builtins larger than `cap`.
    pub fn build(&self, cap: usize) -> Result<FiniteGroup, GroupError> {
        if let Some(order) = self.builtin_order() {
            if order > cap {
                return Err(GroupError::OrderCap { order, cap });
            }
            if order == 0 {
                return Err(GroupError::UnknownSpec(self.to_string()));
            }
        }
        Ok(match self {
            GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n),
            GroupSpec::Dihedral(n) => FiniteGroup::dihedral(*n),
            GroupSpec::Symmetric(n) => FiniteGroup::symmetric(*n),
            GroupSpec::Quaternion => FiniteGroup::quaternion(),
            GroupSpec::File(path) => FiniteGroup::read_table(Path::new(path))?,
        })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupSpec::Quaternion => write!(f, "quaternion"),
            GroupSpec::File(p) => write!(f, "file:{p}"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    /// Accepts `cyclic:4`, `dihedral:4`, `symmetric:3`, `quaternion`, `file:<path>`
    /// and the short forms `Z4`, `D4`, `S3`, `Q8`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || GroupError::UnknownSpec(s.to_owned());
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(GroupSpec::File(path.to_owned()));
        }
        let lower = s.to_ascii_lowercase();
        if lower == "quaternion" || lower == "q8" {
            return Ok(GroupSpec::Quaternion);
        }
        let (family, num) = match lower.split_once(':') {
            Some((family, num)) => (family.to_owned(), num.to_owned()),
            None => {
                let split = lower.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
                (lower[..split].to_owned(), lower[split..].to_owned())
            }
        };
        let n: usize = num.parse().map_err(|_| bad())?;
        match family.as_str() {
            "cyclic" | "z" | "c" => Ok(GroupSpec::Cyclic(n)),
            "dihedral" | "d" => Ok(GroupSpec::Dihedral(n)),
            "symmetric" | "s" => Ok(GroupSpec::Symmetric(n)),
            _ => Err(bad()),
        }
    }
}

/// A subgroup of a shared parent group; normality is computed at construction.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<Elem>,
    mask: Vec<bool>,
    normal: bool,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.members.iter().map(|&m| self.parent.name(m)).collect();
        write!(f, "Subgroup({names:?}, normal={})", self.normal)
    }
}

impl Subgroup {
    /// Smallest subgroup containing `generators`.
    pub fn closure(parent: &Arc<FiniteGroup>, generators: &[Elem]) -> Self {
        let n = parent.order();
        let mut mask = vec![false; n];
        mask[parent.identity() as usize] = true;
        let mut frontier = vec![parent.identity()];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = parent.mul(x, g);
                if !mask[y as usize] {
                    mask[y as usize] = true;
                    frontier.push(y);
                }
            }
        }
        Self::from_mask(parent, mask)
    }

    fn from_mask(parent: &Arc<FiniteGroup>, mask: Vec<bool>) -> Self {
        let members: Vec<Elem> = parent.elements().filter(|&g| mask[g as usize]).collect();
        let normal =
            parent.elements().all(|g| members.iter().all(|&h| mask[parent.conjugate(parent.inv(g), h) as usize]));
        Self { parent: Arc::clone(parent), members, mask, normal }
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        Self::from_mask(parent, vec![true; parent.order()])
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        Self::closure(parent, &[])
    }

    pub fn center(parent: &Arc<FiniteGroup>) -> Self {
        let mask = parent.elements().map(|z| parent.elements().all(|g| parent.mul(z, g) == parent.mul(g, z))).collect();
        Self::from_mask(parent, mask)
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn contains(&self, g: Elem) -> bool {
        self.mask.get(g as usize).copied().unwrap_or(false)
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    /// A pair `(g, h)` with `g·h·g⁻¹` outside the subgroup, if any.
    pub fn normality_witness(&self) -> Option<(Elem, Elem)> {
        let g = &self.parent;
        g.elements()
            .find_map(|x| self.members.iter().find(|&&h| !self.contains(g.mul(g.mul(x, h), g.inv(x)))).map(|&h| (x, h)))
    }

    pub fn is_closed(&self) -> bool {
        let g = &self.parent;
        self.contains(g.identity())
            && self
                .members
                .iter()
                .all(|&a| self.contains(g.inv(a)) && self.members.iter().all(|&b| self.contains(g.mul(a, b))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composes image vectors, right factor first.
    fn compose(s: &[usize], t: &[usize]) -> Vec<usize> {
        (0..s.len()).map(|i| s[t[i]]).collect()
    }

    #[test]
    fn cyclic_table() {
        let z4 = FiniteGroup::cyclic(4);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(z4.mul(i, j) as usize, (i as usize + j as usize) % 4);
            }
        }
    }

    #[test]
    fn symmetric_three_indexing_and_product() {
        let s3 = FiniteGroup::symmetric(3);
        let names: Vec<&str> = s3.elements().map(|g| s3.name(g)).collect();
        assert_eq!(names, ["e", "(12)", "(13)", "(23)", "(123)", "(132)"]);
        // image vectors: (123) sends 1->2->3->1
        let c123 = [1, 2, 0];
        let t12 = [1, 0, 2];
        let t13 = [2, 1, 0];
        assert_eq!(compose(&c123, &t12), t13.to_vec());
        assert_eq!(s3.mul(4, 1), 2);
    }

    #[test]
    fn conjugation_examples() {
        let s3 = FiniteGroup::symmetric(3);
        let g = s3.element("(12)").unwrap();
        let h = s3.element("(132)").unwrap();
        assert_eq!(s3.name(s3.conjugate(g, h)), "(123)");
        for h in s3.elements() {
            assert_eq!(s3.conjugate(s3.identity(), h), h);
        }
        let q8 = FiniteGroup::quaternion();
        let j = q8.element("j").unwrap();
        let i = q8.element("i").unwrap();
        assert_eq!(q8.name(q8.conjugate(j, i)), "-i");
    }

    #[test]
    fn quaternion_relations() {
        let q = FiniteGroup::quaternion();
        let [one, m1, i, j, k] = ["1", "-1", "i", "j", "k"].map(|n| q.element(n).unwrap());
        assert_eq!(q.identity(), one);
        assert_eq!(q.mul(i, i), m1);
        assert_eq!(q.mul(j, j), m1);
        assert_eq!(q.mul(k, k), m1);
        assert_eq!(q.mul(q.mul(i, j), k), m1);
        assert!(!q.is_abelian());
    }

    #[test]
    fn dihedral_relations() {
        let d4 = FiniteGroup::dihedral(4);
        assert_eq!(d4.order(), 8);
        let r = d4.element("r").unwrap();
        let s = d4.element("s").unwrap();
        assert_eq!(d4.product([r, r, r, r]), d4.identity());
        assert_eq!(d4.mul(s, s), d4.identity());
        assert_eq!(d4.mul(d4.mul(s, r), s), d4.inv(r));
        assert!(d4.associativity_witness().is_none());
    }

    #[test]
    fn table_round_trip_matches_builtin() {
        let s3 = FiniteGroup::symmetric(3);
        let parsed = FiniteGroup::parse_table(&s3.to_table_string()).unwrap();
        assert_eq!(parsed, s3);
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(matches!(FiniteGroup::parse_table(""), Err(GroupError::Parse { .. })));
        assert!(matches!(FiniteGroup::parse_table("2\n0 1\n"), Err(GroupError::Parse { .. })));
        assert!(matches!(FiniteGroup::parse_table("2\n0 1\n1 2\n"), Err(GroupError::Parse { .. })));
        // latin square but not associative: a loop of order 5
        let loop5 = "5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n";
        match FiniteGroup::parse_table(loop5) {
            Err(GroupError::Axiom { axiom, witness }) => {
                assert_eq!(axiom, "associativity");
                assert_eq!(witness.len(), 3);
            }
            other => panic!("expected associativity failure, got {other:?}"),
        }
        assert!(matches!(
            FiniteGroup::parse_table("2\n0 0\n1 1\n"),
            Err(GroupError::Axiom { axiom: "row is a permutation", .. })
        ));
    }

    #[test]
    fn subgroup_examples() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let c = s3.element("(123)").unwrap();
        let a3 = Subgroup::closure(&s3, &[c]);
        let names: Vec<&str> = a3.members().iter().map(|&m| s3.name(m)).collect();
        assert_eq!(names, ["e", "(123)", "(132)"]);
        assert!(a3.is_normal());

        let t = s3.element("(12)").unwrap();
        let h = Subgroup::closure(&s3, &[t]);
        assert_eq!(h.order(), 2);
        assert!(!h.is_normal());
        let (g, x) = h.normality_witness().unwrap();
        assert!(!h.contains(s3.mul(s3.mul(g, x), s3.inv(g))));

        let triv = Subgroup::closure(&s3, &[]);
        assert_eq!(triv.members(), &[s3.identity()]);
        assert!(triv.is_normal());
    }

    #[test]
    fn centers() {
        let d4 = Arc::new(FiniteGroup::dihedral(4));
        let z = Subgroup::center(&d4);
        assert_eq!(z.order(), 2);
        assert!(z.contains(d4.element("r^2").unwrap()));
        let q8 = Arc::new(FiniteGroup::quaternion());
        let zq = Subgroup::center(&q8);
        let names: Vec<&str> = zq.members().iter().map(|&m| q8.name(m)).collect();
        assert_eq!(names, ["1", "-1"]);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("cyclic:4".parse::<GroupSpec>().unwrap(), GroupSpec::Cyclic(4));
        assert_eq!("S3".parse::<GroupSpec>().unwrap(), GroupSpec::Symmetric(3));
        assert_eq!("D4".parse::<GroupSpec>().unwrap(), GroupSpec::Dihedral(4));
        assert_eq!("Q8".parse::<GroupSpec>().unwrap(), GroupSpec::Quaternion);
        assert!("banana".parse::<GroupSpec>().is_err());
        assert!(matches!(GroupSpec::Symmetric(5).build(DEFAULT_ORDER_CAP), Err(GroupError::OrderCap { .. })));
    }
}
