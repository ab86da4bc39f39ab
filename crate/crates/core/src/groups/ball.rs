use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::{Domain, GroupElement, GroupError, IDENTITY};

/// Default bound on the number of elements in a ball.
pub const DEFAULT_ELEMENT_CAP: usize = 100_000;

/// Balls up to this size get a precomputed partial multiplication table.
const TABLE_LIMIT: usize = 1500;
const OUTSIDE: u32 = u32::MAX;

/// Finitely generated infinite groups with an explicit normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// `Z^d` with generators `±e_i`; normal form = coordinate vector.
    IntegerLattice(usize),
    /// Integer Heisenberg group, `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`,
    /// generated by `x = (1,0,0)` and `y = (0,1,0)`.
    DiscreteHeisenberg,
    /// Free group; normal form = reduced word of letters `±1..=±rank`.
    FreeGroup(usize),
}

impl GroupKind {
    /// Parses `Z^d` (or `Zd`), `H3` and `Fr`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if ["h3", "h3(z)", "heisenberg"].iter().any(|h| s.eq_ignore_ascii_case(h)) {
            return Some(GroupKind::DiscreteHeisenberg);
        }
        let (head, rest) = s.split_at_checked(1)?;
        let n: usize = rest.trim_start_matches('^').parse().ok().filter(|&n| n > 0)?;
        match head {
            "Z" | "z" => Some(GroupKind::IntegerLattice(n)),
            "F" | "f" => Some(GroupKind::FreeGroup(n)),
            _ => None,
        }
    }

    pub fn identity(&self) -> Vec<i64> {
        match *self {
            GroupKind::IntegerLattice(d) => vec![0; d],
            GroupKind::DiscreteHeisenberg => vec![0; 3],
            GroupKind::FreeGroup(_) => Vec::new(),
        }
    }

    /// Generators followed by their inverses, in the order used for BFS.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        match *self {
            GroupKind::IntegerLattice(d) => (0..d)
                .flat_map(|i| {
                    [1i64, -1].map(|s| {
                        let mut v = vec![0; d];
                        v[i] = s;
                        v
                    })
                })
                .collect(),
            GroupKind::DiscreteHeisenberg => {
                vec![vec![1, 0, 0], vec![0, 1, 0], vec![-1, 0, 0], vec![0, -1, 0]]
            }
            GroupKind::FreeGroup(r) => (1..=r as i64).flat_map(|l| [vec![l], vec![-l]]).collect(),
        }
    }

    pub fn multiply(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        match *self {
            GroupKind::IntegerLattice(_) => a.iter().zip(b).map(|(x, y)| x + y).collect(),
            GroupKind::DiscreteHeisenberg => {
                vec![a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1]]
            }
            GroupKind::FreeGroup(_) => {
                let mut word = a.to_vec();
                for &letter in b {
                    if word.last() == Some(&-letter) {
                        word.pop();
                    } else {
                        word.push(letter);
                    }
                }
                word
            }
        }
    }

    pub fn inverse(&self, a: &[i64]) -> Vec<i64> {
        match *self {
            GroupKind::IntegerLattice(_) => a.iter().map(|x| -x).collect(),
            GroupKind::DiscreteHeisenberg => vec![-a[0], -a[1], a[0] * a[1] - a[2]],
            GroupKind::FreeGroup(_) => a.iter().rev().map(|l| -l).collect(),
        }
    }

    /// Coordinates in the free abelian quotient used for additive maps.
    pub fn abelian_coords(&self, a: &[i64]) -> Vec<i64> {
        match *self {
            GroupKind::IntegerLattice(_) => a.to_vec(),
            GroupKind::DiscreteHeisenberg => vec![a[0], a[1]],
            GroupKind::FreeGroup(r) => {
                let mut sums = vec![0; r];
                for &l in a {
                    sums[(l.unsigned_abs() - 1) as usize] += l.signum();
                }
                sums
            }
        }
    }

    pub fn abelian_rank(&self) -> usize {
        match *self {
            GroupKind::IntegerLattice(d) => d,
            GroupKind::DiscreteHeisenberg => 2,
            GroupKind::FreeGroup(r) => r,
        }
    }

    fn validate_form(&self, form: &[i64]) -> Result<(), GroupError> {
        let ok = match *self {
            GroupKind::IntegerLattice(d) => form.len() == d,
            GroupKind::DiscreteHeisenberg => form.len() == 3,
            GroupKind::FreeGroup(r) => {
                form.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= r)
                    && form.windows(2).all(|w| w[0] != -w[1])
            }
        };
        if ok {
            Ok(())
        } else {
            Err(GroupError::InvalidBall(format!("`{form:?}` is not a normal form for {self}")))
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::IntegerLattice(d) => write!(f, "Z^{d}"),
            GroupKind::DiscreteHeisenberg => write!(f, "H3(Z)"),
            GroupKind::FreeGroup(r) => write!(f, "F{r}"),
        }
    }
}

/// The word-length ball of a given radius, with partial multiplication.
///
/// Elements are listed in breadth-first order from the identity, so word
/// lengths are non-decreasing along the element list.
#[derive(Debug, Clone)]
pub struct BallDomain {
    kind: GroupKind,
    radius: usize,
    elements: Vec<Vec<i64>>,
    lengths: Vec<usize>,
    index: HashMap<Vec<i64>, GroupElement>,
    inv: Vec<GroupElement>,
    table: Option<Vec<u32>>,
}

impl BallDomain {
    pub fn new(kind: GroupKind, radius: usize) -> Result<Self, GroupError> {
        Self::with_cap(kind, radius, DEFAULT_ELEMENT_CAP)
    }

    pub fn with_cap(kind: GroupKind, radius: usize, cap: usize) -> Result<Self, GroupError> {
        let gens = kind.generators();
        let identity = kind.identity();
        let mut elements = vec![identity.clone()];
        let mut lengths = vec![0];
        let mut index = HashMap::from([(identity, IDENTITY)]);
        let mut queue = VecDeque::from([IDENTITY]);
        while let Some(x) = queue.pop_front() {
            if lengths[x] == radius {
                continue;
            }
            for g in &gens {
                let y = kind.multiply(&elements[x], g);
                if index.contains_key(&y) {
                    continue;
                }
                if elements.len() == cap {
                    return Err(GroupError::BallTooLarge { radius, cap });
                }
                index.insert(y.clone(), elements.len());
                queue.push_back(elements.len());
                lengths.push(lengths[x] + 1);
                elements.push(y);
            }
        }
        Self::assemble(kind, radius, elements, lengths, index)
    }

    fn assemble(
        kind: GroupKind,
        radius: usize,
        elements: Vec<Vec<i64>>,
        lengths: Vec<usize>,
        index: HashMap<Vec<i64>, GroupElement>,
    ) -> Result<Self, GroupError> {
        let inv = elements
            .iter()
            .map(|e| {
                index.get(&kind.inverse(e)).copied().ok_or_else(|| {
                    GroupError::InvalidBall(format!("inverse of {e:?} missing from the ball"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut ball = Self { kind, radius, elements, lengths, index, inv, table: None };
        let n = ball.elements.len();
        if n <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    let v = ball.lookup_product(a, b).map_or(OUTSIDE, |c| c as u32);
                    table.push(v);
                }
            }
            ball.table = Some(table);
        }
        Ok(ball)
    }

    fn lookup_product(&self, a: GroupElement, b: GroupElement) -> Option<GroupElement> {
        let p = self.kind.multiply(&self.elements[a], &self.elements[b]);
        self.index.get(&p).copied()
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn elements(&self) -> &[Vec<i64>] {
        &self.elements
    }

    pub fn normal_form(&self, a: GroupElement) -> &[i64] {
        &self.elements[a]
    }

    pub fn find(&self, form: &[i64]) -> Option<GroupElement> {
        self.index.get(form).copied()
    }

    /// Maps a normal-form transformation over the ball; fails if the image
    /// of some element leaves the ball.
    pub fn map_forms(
        &self,
        f: impl Fn(&[i64]) -> Vec<i64>,
    ) -> Result<Vec<GroupElement>, GroupError> {
        self.elements
            .iter()
            .map(|e| {
                let image = f(e);
                self.find(&image).ok_or_else(|| {
                    GroupError::InvalidBall(format!("image {image:?} of {e:?} leaves the ball"))
                })
            })
            .collect()
    }

    /// One normal form per line, coordinates separated by spaces.
    pub fn to_ball_text(&self) -> String {
        let mut out = String::new();
        for e in &self.elements {
            let line: Vec<String> = e.iter().map(|c| c.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Reads a ball file and checks it against the ball of the same radius.
    ///
    /// Line order is preserved; the identity must come first.
    pub fn from_ball_text(kind: GroupKind, radius: usize, text: &str) -> Result<Self, GroupError> {
        let mut elements = Vec::new();
        for line in text.lines() {
            let form = line
                .split_whitespace()
                .map(str::parse::<i64>)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| GroupError::InvalidBall(format!("bad coordinate: {e}")))?;
            kind.validate_form(&form)?;
            elements.push(form);
        }
        if elements.first() != Some(&kind.identity()) {
            return Err(GroupError::InvalidBall("first element must be the identity".into()));
        }
        let reference = Self::new(kind, radius)?;
        if elements.len() != reference.size() {
            return Err(GroupError::InvalidBall(format!(
                "expected {} elements, found {}",
                reference.size(),
                elements.len()
            )));
        }
        let mut index = HashMap::new();
        let mut lengths = Vec::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            let at = reference
                .find(e)
                .ok_or_else(|| GroupError::InvalidBall(format!("{e:?} is not in the ball")))?;
            if index.insert(e.clone(), i).is_some() {
                return Err(GroupError::InvalidBall(format!("duplicate element {e:?}")));
            }
            lengths.push(reference.lengths[at]);
        }
        Self::assemble(kind, radius, elements, lengths, index)
    }
}

impl Domain for BallDomain {
    fn size(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    fn mul(&self, a: GroupElement, b: GroupElement) -> Option<GroupElement> {
        match &self.table {
            Some(t) => {
                let v = t[a * self.elements.len() + b];
                (v != OUTSIDE).then_some(v as usize)
            }
            None => self.lookup_product(a, b),
        }
    }

    fn inv(&self, a: GroupElement) -> GroupElement {
        self.inv[a]
    }

    fn name(&self) -> String {
        format!("ball({}, r={})", self.kind, self.radius)
    }

    fn is_closed(&self) -> bool {
        false
    }

    fn abelian_rank(&self) -> usize {
        self.kind.abelian_rank()
    }

    fn abelian_coords(&self, a: GroupElement) -> Vec<i64> {
        self.kind.abelian_coords(&self.elements[a])
    }

    fn word_length(&self, a: GroupElement) -> Option<usize> {
        Some(self.lengths[a])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn kind_names_round_trip() {
        for k in [GroupKind::IntegerLattice(2), GroupKind::DiscreteHeisenberg, GroupKind::FreeGroup(3)] {
            assert_eq!(GroupKind::parse(&k.to_string()), Some(k));
        }
        assert_eq!(GroupKind::parse("Z1"), Some(GroupKind::IntegerLattice(1)));
        assert_eq!(GroupKind::parse("Z^0"), None);
        assert_eq!(GroupKind::parse("Q8"), None);
    }

    #[test]
    fn lattice_balls() {
        let b = BallDomain::new(GroupKind::IntegerLattice(1), 3).unwrap();
        assert_eq!(b.size(), 7);
        let coords: HashSet<i64> = b.elements().iter().map(|e| e[0]).collect();
        assert_eq!(coords, (-3..=3).collect());

        let b = BallDomain::new(GroupKind::IntegerLattice(2), 2).unwrap();
        assert_eq!(b.size(), 13);
    }

    /// Independent BFS over Heisenberg coordinates.
    fn heisenberg_oracle(radius: usize) -> HashSet<(i64, i64, i64)> {
        let step = |(a, b, c): (i64, i64, i64), (p, q): (i64, i64)| (a + p, b + q, c + a * q);
        let mut seen = HashSet::from([(0, 0, 0)]);
        let mut frontier = vec![(0, 0, 0)];
        for _ in 0..radius {
            let mut next = Vec::new();
            for x in frontier {
                for g in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
                    let y = step(x, g);
                    if seen.insert(y) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        seen
    }

    #[test]
    fn heisenberg_ball_matches_oracle() {
        for r in 0..=4 {
            let b = BallDomain::new(GroupKind::DiscreteHeisenberg, r).unwrap();
            let got: HashSet<(i64, i64, i64)> =
                b.elements().iter().map(|e| (e[0], e[1], e[2])).collect();
            assert_eq!(got, heisenberg_oracle(r), "radius {r}");
        }
        assert_eq!(BallDomain::new(GroupKind::DiscreteHeisenberg, 2).unwrap().size(), 17);
    }

    #[test]
    fn free_group_ball() {
        // 1 + 4 + 12 reduced words of length <= 2 in F2
        let b = BallDomain::new(GroupKind::FreeGroup(2), 2).unwrap();
        assert_eq!(b.size(), 17);
        assert_eq!(b.abelian_coords(b.find(&[1, 1]).unwrap()), vec![2, 0]);
    }

    #[test]
    fn ball_invariants() {
        for kind in [
            GroupKind::IntegerLattice(2),
            GroupKind::DiscreteHeisenberg,
            GroupKind::FreeGroup(2),
        ] {
            let small = BallDomain::new(kind, 2).unwrap();
            let big = BallDomain::new(kind, 3).unwrap();
            assert_eq!(small.normal_form(IDENTITY), kind.identity().as_slice());
            for (a, e) in small.elements().iter().enumerate() {
                assert!(big.find(e).is_some(), "monotone");
                assert!(small.word_length(a).unwrap() <= 2);
                assert_eq!(small.mul(a, small.inv(a)), Some(IDENTITY));
            }
            let distinct: HashSet<&Vec<i64>> = small.elements().iter().collect();
            assert_eq!(distinct.len(), small.size());
        }
    }

    #[test]
    fn partial_products() {
        let b = BallDomain::new(GroupKind::IntegerLattice(1), 2).unwrap();
        let two = b.find(&[2]).unwrap();
        let one = b.find(&[1]).unwrap();
        assert_eq!(b.mul(two, one), None);
        assert_eq!(b.mul(two, b.inv(one)), Some(one));
    }

    #[test]
    fn element_cap() {
        let err = BallDomain::with_cap(GroupKind::IntegerLattice(3), 10, 50).unwrap_err();
        assert!(matches!(err, GroupError::BallTooLarge { .. }));
    }

    #[test]
    fn ball_text_round_trip() {
        let b = BallDomain::new(GroupKind::FreeGroup(2), 2).unwrap();
        let text = b.to_ball_text();
        assert!(text.starts_with('\n'));
        let back = BallDomain::from_ball_text(GroupKind::FreeGroup(2), 2, &text).unwrap();
        assert_eq!(back.elements(), b.elements());
        assert!(BallDomain::from_ball_text(GroupKind::FreeGroup(2), 2, "1 -1\n").is_err());
    }
}
