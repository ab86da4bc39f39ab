use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use super::{Domain, GroupElement, GroupError, IDENTITY};

/// Names listed by the `catalog` command.
pub const CATALOG: &[&str] = &[
    "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z2xZ2", "Z2xZ4", "S3", "S4", "D4", "Q8",
];

const MAX_ORDER: usize = 512;
const MAX_SYMMETRIC: usize = 5;
const MAX_DIHEDRAL: usize = 8;

/// A finite group stored as a dense multiplication table.
///
/// Element 0 is the identity. `mul` is row-major: entry `a * order + b`
/// holds the index of `a·b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mul: Vec<GroupElement>,
    inv: Vec<GroupElement>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Builds and validates a group from a full Cayley table.
    pub fn from_table(name: &str, table: Vec<Vec<GroupElement>>) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        let mut mul = Vec::with_capacity(order * order);
        for (a, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::InvalidTable(format!(
                    "row {a} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for &c in row {
                if c >= order {
                    return Err(GroupError::InvalidTable(format!("entry {c} out of range in row {a}")));
                }
            }
            mul.extend_from_slice(row);
        }
        let labels = (0..order).map(|k| k.to_string()).collect();
        let group = Self::assemble(name, order, mul, labels)?;
        group.check_associative()?;
        Ok(group)
    }

    /// Assembles a group from a table known to be a group table with identity 0.
    fn assemble(
        name: &str,
        order: usize,
        mul: Vec<GroupElement>,
        labels: Vec<String>,
    ) -> Result<Self, GroupError> {
        for a in 0..order {
            if mul[a] != a || mul[a * order] != a {
                return Err(GroupError::InvalidTable(format!(
                    "element 0 is not a two-sided identity (fails at {a})"
                )));
            }
        }
        let mut inv = vec![usize::MAX; order];
        for a in 0..order {
            let row = &mul[a * order..(a + 1) * order];
            match row.iter().position(|&c| c == IDENTITY) {
                Some(b) if mul[b * order + a] == IDENTITY => inv[a] = b,
                _ => {
                    return Err(GroupError::InvalidTable(format!("element {a} has no two-sided inverse")))
                }
            }
            let mut seen = vec![false; order];
            for &c in row {
                if std::mem::replace(&mut seen[c], true) {
                    return Err(GroupError::InvalidTable(format!("row {a} is not a permutation")));
                }
            }
        }
        Ok(Self { name: name.to_string(), order, mul, inv, labels })
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul[a * n + b];
                for c in 0..n {
                    if self.mul[ab * n + c] != self.mul[a * n + self.mul[b * n + c]] {
                        return Err(GroupError::InvalidTable(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses a catalog name such as `Z4`, `Z2xZ4`, `S3`, `D4` or `Q8`.
    ///
    /// Factors separated by `x` (or `×`) are combined with [`direct_product`](Self::direct_product).
    pub fn catalog(spec: &str) -> Result<Self, GroupError> {
        let spec = spec.trim();
        let factors: Vec<&str> = spec.split(['x', 'X', '×']).map(str::trim).collect();
        if factors.iter().any(|f| f.is_empty()) {
            return Err(GroupError::UnknownSpec(spec.to_string()));
        }
        let mut groups = factors.iter().map(|f| Self::catalog_factor(f, spec));
        let first = groups.next().ok_or_else(|| GroupError::UnknownSpec(spec.to_string()))??;
        let mut product = first;
        for g in groups {
            let g = g?;
            if product.order * g.order > MAX_ORDER {
                return Err(GroupError::OutOfRange {
                    spec: spec.to_string(),
                    reason: format!("order exceeds {MAX_ORDER}"),
                });
            }
            product = product.direct_product(&g);
        }
        product.name = spec.replace(['X', '×'], "x");
        Ok(product)
    }

    fn catalog_factor(factor: &str, spec: &str) -> Result<Self, GroupError> {
        let unknown = || GroupError::UnknownSpec(spec.to_string());
        let mut chars = factor.chars();
        let family = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
        let n: usize = chars.as_str().parse().map_err(|_| unknown())?;
        let range = |reason: String| GroupError::OutOfRange { spec: spec.to_string(), reason };
        match family {
            'Z' | 'C' => {
                if n == 0 || n > MAX_ORDER {
                    return Err(range(format!("Z_n needs 1 <= n <= {MAX_ORDER}")));
                }
                Ok(Self::cyclic(n))
            }
            'S' => {
                if n == 0 || n > MAX_SYMMETRIC {
                    return Err(range(format!("S_n needs 1 <= n <= {MAX_SYMMETRIC}")));
                }
                Ok(Self::symmetric(n))
            }
            'D' => {
                if n == 0 || n > MAX_DIHEDRAL {
                    return Err(range(format!("D_n needs 1 <= n <= {MAX_DIHEDRAL}")));
                }
                Ok(Self::dihedral(n))
            }
            'Q' if n == 8 => Ok(Self::quaternion()),
            _ => Err(unknown()),
        }
    }

    /// Cyclic group `Z_n`; element `k` is `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mul = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let labels = (0..n).map(|k| k.to_string()).collect();
        Self::assemble(&format!("Z{n}"), n, mul, labels).expect("cyclic table")
    }

    /// Symmetric group `S_n`, permutations in lexicographic order, product
    /// `(p·q)(i) = p(q(i))`.
    pub fn symmetric(n: usize) -> Self {
        let mut perms: Vec<Vec<u8>> = Vec::new();
        let mut current: Vec<u8> = (0..n as u8).collect();
        loop {
            perms.push(current.clone());
            if !next_permutation(&mut current) {
                break;
            }
        }
        let index: BTreeMap<Vec<u8>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let order = perms.len();
        let mut mul = Vec::with_capacity(order * order);
        for p in &perms {
            for q in &perms {
                let pq: Vec<u8> = q.iter().map(|&i| p[i as usize]).collect();
                mul.push(index[&pq]);
            }
        }
        let labels = perms
            .iter()
            .map(|p| {
                let body: Vec<String> = p.iter().map(|v| v.to_string()).collect();
                format!("[{}]", body.join(" "))
            })
            .collect();
        Self::assemble(&format!("S{n}"), order, mul, labels).expect("symmetric table")
    }

    /// Dihedral group of order `2n`. Element `s^i r^a` has index `i·n + a`,
    /// with `s r s = r⁻¹`.
    pub fn dihedral(n: usize) -> Self {
        let order = 2 * n;
        let decode = |k: usize| (k / n, k % n);
        let mut mul = Vec::with_capacity(order * order);
        for x in 0..order {
            let (i, a) = decode(x);
            for y in 0..order {
                let (j, b) = decode(y);
                // s^i r^a s^j r^b = s^(i+j) r^((-1)^j a + b)
                let rot = if j == 0 { (a + b) % n } else { (n - a + b) % n };
                mul.push(((i + j) % 2) * n + rot);
            }
        }
        let labels = (0..order)
            .map(|k| {
                let (i, a) = decode(k);
                if i == 0 { format!("r{a}") } else { format!("sr{a}") }
            })
            .collect();
        Self::assemble(&format!("D{n}"), order, mul, labels).expect("dihedral table")
    }

    /// Quaternion group, generated by `i` and `j` inside the unit quaternions.
    /// Order: `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Self {
        type Quat = [i8; 4];
        fn qmul(p: Quat, q: Quat) -> Quat {
            [
                p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
                p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
                p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
                p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0],
            ]
        }
        let gens: [Quat; 2] = [[0, 1, 0, 0], [0, 0, 1, 0]];
        let mut elems: Vec<Quat> = vec![[1, 0, 0, 0]];
        let mut queue = VecDeque::from([[1, 0, 0, 0]]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = qmul(x, g);
                if !elems.contains(&y) {
                    elems.push(y);
                    queue.push_back(y);
                }
            }
        }
        let key = |q: &Quat| {
            let axis = q.iter().position(|&c| c != 0).unwrap();
            (axis, q[axis] < 0)
        };
        elems.sort_by_key(key);
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
        let pos = |q: Quat| elems.iter().position(|&e| e == q).unwrap();
        let mut mul = Vec::with_capacity(64);
        for &p in &elems {
            for &q in &elems {
                mul.push(pos(qmul(p, q)));
            }
        }
        let labels = names.iter().map(|s| s.to_string()).collect();
        Self::assemble("Q8", elems.len(), mul, labels).expect("quaternion table")
    }

    /// Direct product with componentwise multiplication; `(g, h)` has index
    /// `g·|H| + h`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order, other.order);
        let order = n * m;
        let mut mul = Vec::with_capacity(order * order);
        for x in 0..order {
            let (a, b) = (x / m, x % m);
            for y in 0..order {
                let (c, d) = (y / m, y % m);
                mul.push(self.mul[a * n + c] * m + other.mul[b * m + d]);
            }
        }
        let labels = (0..order)
            .map(|x| format!("({},{})", self.labels[x / m], other.labels[x % m]))
            .collect();
        let name = format!("{}x{}", self.name, other.name);
        Self::assemble(&name, order, mul, labels).expect("product of groups is a group")
    }

    /// Quotient by the commutator subgroup together with the projection map.
    ///
    /// Cosets are ordered by their smallest representative, so the identity
    /// coset is element 0.
    pub fn abelianization(&self) -> (FiniteGroup, Vec<GroupElement>) {
        let n = self.order;
        let commutators: Vec<usize> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        let derived = self.closure(&commutators);
        let mut projection = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for a in 0..n {
            if projection[a] != usize::MAX {
                continue;
            }
            let coset = reps.len();
            reps.push(a);
            for &k in &derived {
                projection[self.op(a, k)] = coset;
            }
        }
        let q = reps.len();
        let mut mul = Vec::with_capacity(q * q);
        for &a in &reps {
            for &b in &reps {
                mul.push(projection[self.op(a, b)]);
            }
        }
        let labels = reps.iter().map(|&r| format!("[{}]", self.labels[r])).collect();
        let quotient = Self::assemble(&format!("{}^ab", self.name), q, mul, labels)
            .expect("quotient by a normal subgroup is a group");
        (quotient, projection)
    }

    /// Subgroup generated by `gens`, as a sorted list of elements.
    pub fn closure(&self, gens: &[GroupElement]) -> Vec<GroupElement> {
        let mut inside = vec![false; self.order];
        inside[IDENTITY] = true;
        let mut queue = VecDeque::from([IDENTITY]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.op(x, g);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| inside[x]).collect()
    }

    /// A small generating set, chosen greedily among elements of largest order.
    pub fn generators(&self) -> Vec<GroupElement> {
        let mut candidates: Vec<usize> = (1..self.order).collect();
        candidates.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut span = vec![IDENTITY];
        for a in candidates {
            if span.len() == self.order {
                break;
            }
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    pub fn commutator(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        let ab = self.op(a, b);
        let ab_ainv = self.op(ab, self.inv[a]);
        self.op(ab_ainv, self.inv[b])
    }

    pub fn element_order(&self, a: GroupElement) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != IDENTITY {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| (a + 1..n).all(|b| self.op(a, b) == self.op(b, a)))
    }

    /// Total multiplication.
    #[inline]
    pub fn op(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        self.mul[a * self.order + b]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn inverse(&self, a: GroupElement) -> GroupElement {
        self.inv[a]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn label(&self, a: GroupElement) -> &str {
        &self.labels[a]
    }

    pub fn table_row(&self, a: GroupElement) -> &[GroupElement] {
        &self.mul[a * self.order..(a + 1) * self.order]
    }

    /// Cayley-table text: the order on the first line, then one row per element.
    pub fn to_cayley_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for a in 0..self.order {
            let row: Vec<String> = self.table_row(a).iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn from_cayley_text(name: &str, text: &str) -> Result<Self, GroupError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| GroupError::InvalidTable("missing order line".into()))?;
        let order: usize = header
            .trim()
            .parse()
            .map_err(|_| GroupError::InvalidTable(format!("bad order line `{header}`")))?;
        let mut table = Vec::with_capacity(order);
        for line in lines {
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| GroupError::InvalidTable(format!("bad entry: {e}")))?;
            table.push(row);
        }
        if table.len() != order {
            return Err(GroupError::InvalidTable(format!(
                "expected {order} rows, found {}",
                table.len()
            )));
        }
        Self::from_table(name, table)
    }
}

impl Domain for FiniteGroup {
    fn size(&self) -> usize {
        self.order
    }

    #[inline]
    fn mul(&self, a: GroupElement, b: GroupElement) -> Option<GroupElement> {
        Some(self.op(a, b))
    }

    fn inv(&self, a: GroupElement) -> GroupElement {
        self.inv[a]
    }

    fn name(&self) -> String {
        self.name.clone()
    }

    fn is_closed(&self) -> bool {
        true
    }
}

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn associative(g: &FiniteGroup) -> bool {
        let n = g.order();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| g.op(g.op(a, b), c) == g.op(a, g.op(b, c))))
        })
    }

    #[test]
    fn catalog_groups_are_groups() {
        for name in CATALOG.iter().chain(["S5", "D8", "Z3xS3", "D3"].iter()) {
            let g = FiniteGroup::catalog(name).unwrap();
            if g.order() <= 24 {
                assert!(associative(&g), "{name}");
            }
            for a in 0..g.order() {
                assert_eq!(g.op(a, g.inverse(a)), IDENTITY);
                assert_eq!(g.op(IDENTITY, a), a);
            }
        }
    }

    #[test]
    fn cyclic_four() {
        let z4 = FiniteGroup::catalog("Z4").unwrap();
        assert_eq!(z4.order(), 4);
        assert_eq!(z4.op(1, 3), 0);
        assert!(z4.is_abelian());
    }

    #[test]
    fn s3_is_nonabelian() {
        let s3 = FiniteGroup::catalog("S3").unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
    }

    #[test]
    fn q8_has_one_involution() {
        let q8 = FiniteGroup::catalog("Q8").unwrap();
        let order_two = (0..8).filter(|&a| q8.element_order(a) == 2).count();
        assert_eq!(order_two, 1);
        assert_eq!(q8.label(1), "-1");
    }

    #[test]
    fn dihedral_reflections() {
        let d4 = FiniteGroup::catalog("D4").unwrap();
        assert_eq!(d4.order(), 8);
        // reflections s r^a are all of order two
        assert!((4..8).all(|x| d4.element_order(x) == 2));
        assert_eq!(d4.element_order(1), 4);
        assert!(!d4.is_abelian());
    }

    #[test]
    fn products() {
        let z2 = FiniteGroup::cyclic(2);
        let klein = z2.direct_product(&z2);
        assert_eq!(klein.order(), 4);
        assert!((0..4).all(|a| klein.inverse(a) == a));

        let z2z4 = FiniteGroup::catalog("Z2xZ4").unwrap();
        assert_eq!(z2z4.order(), 8);
        assert!(z2z4.is_abelian());

        let s3z2 = FiniteGroup::symmetric(3).direct_product(&z2);
        assert_eq!(s3z2.order(), 12);
        let nc = (0..12).any(|a| (0..12).any(|b| s3z2.op(a, b) != s3z2.op(b, a)));
        assert!(nc);
        assert!(associative(&s3z2));
    }

    #[test]
    fn abelianizations() {
        let z4 = FiniteGroup::cyclic(4);
        let (q, p) = z4.abelianization();
        assert_eq!(q.order(), 4);
        assert_eq!(p, vec![0, 1, 2, 3]);

        let (q, _) = FiniteGroup::symmetric(3).abelianization();
        assert_eq!(q.order(), 2);

        let (q, _) = FiniteGroup::quaternion().abelianization();
        assert_eq!(q.order(), 4);
        assert!((0..4).all(|a| q.op(a, a) == IDENTITY));
    }

    #[test]
    fn abelianization_kills_commutators() {
        for name in CATALOG {
            let g = FiniteGroup::catalog(name).unwrap();
            let (q, proj) = g.abelianization();
            assert!(q.is_abelian());
            assert_eq!(g.order() % q.order(), 0);
            for a in 0..g.order() {
                for b in 0..g.order() {
                    assert_eq!(proj[g.commutator(a, b)], IDENTITY);
                    assert_eq!(proj[g.op(a, b)], q.op(proj[a], proj[b]));
                }
            }
        }
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(FiniteGroup::catalog("A5"), Err(GroupError::UnknownSpec(_))));
        assert!(matches!(FiniteGroup::catalog("S6"), Err(GroupError::OutOfRange { .. })));
        assert!(matches!(FiniteGroup::catalog("D9"), Err(GroupError::OutOfRange { .. })));
        assert!(matches!(FiniteGroup::catalog("Z0"), Err(GroupError::OutOfRange { .. })));
        assert!(matches!(FiniteGroup::catalog("Q4"), Err(GroupError::UnknownSpec(_))));
        assert!(matches!(FiniteGroup::catalog("Z2x"), Err(GroupError::UnknownSpec(_))));
    }

    #[test]
    fn cayley_text_round_trip() {
        let g = FiniteGroup::catalog("D4").unwrap();
        let text = g.to_cayley_text();
        assert!(text.starts_with("8\n"));
        let back = FiniteGroup::from_cayley_text("D4", &text).unwrap();
        assert_eq!(back.order(), 8);
        assert_eq!(back.mul, g.mul);
    }

    #[test]
    fn rejects_bad_tables() {
        // not associative: a Latin square with identity that is not a group
        let bad = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_table("bad", bad).is_err());
        assert!(FiniteGroup::from_table("bad", vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(FiniteGroup::from_cayley_text("bad", "2\n0 1\n").is_err());
    }
}
