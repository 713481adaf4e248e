use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::GcohError;

/// Largest group accepted from a permutation description.
const MAX_PARSED_ORDER: usize = 4096;

/// A finite group given by its multiplication table on `0..order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupData", into = "GroupData")]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GroupData {
    Table {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        identity: Option<usize>,
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Permutations {
        permutations: Vec<Vec<usize>>,
    },
}

impl TryFrom<GroupData> for FiniteGroup {
    type Error = GcohError;
    fn try_from(d: GroupData) -> Result<Self, GcohError> {
        match d {
            GroupData::Table {
                order,
                identity,
                table,
                labels,
            } => {
                let g = FiniteGroup::from_table(table)?;
                if order.is_some_and(|n| n != g.n) {
                    return Err(GcohError::InvalidGroup(
                        "order does not match the table".into(),
                    ));
                }
                if identity.is_some_and(|e| e != g.identity) {
                    return Err(GcohError::InvalidGroup(format!(
                        "element {} is not the identity",
                        identity.unwrap_or_default()
                    )));
                }
                match labels {
                    Some(l) => g.with_labels(l),
                    None => Ok(g),
                }
            }
            GroupData::Permutations { permutations } => {
                FiniteGroup::from_permutations(&permutations, MAX_PARSED_ORDER)
            }
        }
    }
}

impl From<FiniteGroup> for GroupData {
    fn from(g: FiniteGroup) -> Self {
        GroupData::Table {
            order: Some(g.n),
            identity: Some(g.identity),
            table: g.table(),
            labels: g.labels,
        }
    }
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GcohError> {
        let n = table.len();
        let bad = |m: &str| Err(GcohError::InvalidGroup(m.to_string()));
        if n == 0 {
            return bad("a group has at least one element");
        }
        if table
            .iter()
            .any(|r| r.len() != n || r.iter().any(|&x| x >= n))
        {
            return bad("table must be square with entries below the order");
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let Some(identity) =
            (0..n).find(|&e| (0..n).all(|x| flat[e * n + x] == x && flat[x * n + e] == x))
        else {
            return bad("no identity element");
        };
        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b];
                for c in 0..n {
                    if flat[ab * n + c] != flat[a * n + flat[b * n + c]] {
                        return Err(GcohError::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| flat[a * n + b] == identity) {
                Some(b) => inverses[a] = b,
                None => return Err(GcohError::InvalidGroup(format!("{a} has no inverse"))),
            }
        }
        Ok(FiniteGroup {
            n,
            table: flat,
            identity,
            inverses,
            labels: None,
        })
    }

    /// Trusted constructor for tables produced by the crate itself.
    pub(crate) fn from_flat(n: usize, table: Vec<usize>, identity: usize) -> Self {
        debug_assert_eq!(table.len(), n * n);
        let mut inverses = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == identity {
                    inverses[a] = b;
                    break;
                }
            }
        }
        FiniteGroup {
            n,
            table,
            identity,
            inverses,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GcohError> {
        if labels.len() != self.n {
            return Err(GcohError::InvalidGroup(format!(
                "{} labels for a group of order {}",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Closure of `gens` under `mul`, elements numbered in breadth-first
    /// order starting from the identity at 0.
    pub fn generated_by<T, F>(
        identity: T,
        gens: &[T],
        mul: F,
        limit: usize,
    ) -> Result<(FiniteGroup, Vec<T>), GcohError>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let x = mul(&elems[i], g);
                if !index.contains_key(&x) {
                    if elems.len() >= limit {
                        return Err(GcohError::SizeBoundExceeded {
                            what: "generated group order".into(),
                            size: elems.len() + 1,
                            bound: limit,
                        });
                    }
                    index.insert(x.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(x);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&mul(&elems[a], &elems[b])];
            }
        }
        Ok((FiniteGroup::from_flat(n, table, 0), elems))
    }

    /// Group generated by permutations of `0..degree` (composition
    /// `(p q)(i) = p(q(i))`).
    pub fn from_permutations(perms: &[Vec<usize>], limit: usize) -> Result<Self, GcohError> {
        let degree = perms.first().map_or(0, Vec::len);
        for p in perms {
            let mut seen = vec![false; degree];
            if p.len() != degree
                || p.iter()
                    .any(|&x| x >= degree || std::mem::replace(&mut seen[x], true))
            {
                return Err(GcohError::InvalidGroup(format!(
                    "{p:?} is not a permutation of 0..{degree}"
                )));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let (g, _) =
            Self::generated_by(id, perms, |p, q| q.iter().map(|&i| p[i]).collect(), limit)?;
        Ok(g)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z/n` with element `k` at index `k`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::from_flat(n, table, 0)
    }

    /// `self x other` with `(a, b)` at index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n1, n2) = (self.n, other.n);
        let n = n1 * n2;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let a = self.mul(x / n2, y / n2);
                let b = other.mul(x % n2, y % n2);
                table[x * n + y] = a * n2 + b;
            }
        }
        Self::from_flat(n, table, self.identity * n2 + other.identity)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `g x g^{-1}`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `a b a^{-1} b^{-1}`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.n).filter(|&x| seen[x]).collect()
    }

    /// Smallest normal subgroup containing `gens`.
    pub fn normal_closure(&self, gens: &[usize]) -> Vec<usize> {
        let conj: BTreeSet<usize> = gens
            .iter()
            .flat_map(|&x| (0..self.n).map(move |g| (g, x)))
            .map(|(g, x)| self.conjugate(g, x))
            .collect();
        let conj: Vec<usize> = conj.into_iter().collect();
        self.subgroup_generated(&conj)
    }

    pub fn is_subgroup(&self, s: &[usize]) -> bool {
        let set: BTreeSet<usize> = s.iter().copied().collect();
        set.contains(&self.identity)
            && s.iter()
                .all(|&a| s.iter().all(|&b| set.contains(&self.mul(a, self.inv(b)))))
    }

    pub fn is_normal(&self, s: &[usize]) -> bool {
        let set: BTreeSet<usize> = s.iter().copied().collect();
        self.is_subgroup(s)
            && s.iter()
                .all(|&x| (0..self.n).all(|g| set.contains(&self.conjugate(g, x))))
    }

    /// Quotient by a normal subgroup; cosets are numbered by their smallest
    /// element. Returns the group and the projection.
    pub fn quotient(&self, normal: &[usize]) -> (FiniteGroup, Vec<usize>) {
        assert!(self.is_normal(normal), "quotient by a non-normal subset");
        let mut proj = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for x in 0..self.n {
            if proj[x] == usize::MAX {
                let c = reps.len();
                reps.push(x);
                for &k in normal {
                    proj[self.mul(x, k)] = c;
                }
            }
        }
        let m = reps.len();
        let mut table = vec![0; m * m];
        for a in 0..m {
            for b in 0..m {
                table[a * m + b] = proj[self.mul(reps[a], reps[b])];
            }
        }
        let id = proj[self.identity];
        (Self::from_flat(m, table, id), proj)
    }

    /// Whether `map` (indexed by elements of `self`) is a homomorphism.
    pub fn is_homomorphism(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        map.len() == self.n
            && map.iter().all(|&x| x < target.n)
            && (0..self.n)
                .all(|a| (0..self.n).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b])))
    }

    /// A generating set, built greedily from elements of largest order.
    pub fn generators(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = (0..self.n).filter(|&x| x != self.identity).collect();
        by_order.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for x in by_order {
            if span.len() == self.n {
                break;
            }
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.subgroup_generated(&gens);
            }
        }
        gens
    }

    /// Breadth-first words over `gens`: the visiting order, and for each
    /// element its parent and the generator index with
    /// `elem = parent * gens[k]` (`None` for the identity).
    pub fn word_tree(&self, gens: &[usize]) -> (Vec<usize>, Vec<Option<(usize, usize)>>) {
        let mut tree = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[self.identity] = true;
        let mut order = vec![self.identity];
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for (k, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    tree[y] = Some((x, k));
                    order.push(y);
                }
            }
        }
        (order, tree)
    }

    /// Extends generator images to a map on all of `self`; `None` if the
    /// images do not define a homomorphism.
    pub fn extend_homomorphism(
        &self,
        target: &FiniteGroup,
        gens: &[usize],
        images: &[usize],
    ) -> Option<Vec<usize>> {
        let (order, tree) = self.word_tree(gens);
        if order.len() != self.n {
            return None;
        }
        let mut map = vec![usize::MAX; self.n];
        for &x in &order {
            map[x] = match tree[x] {
                None => target.identity,
                Some((p, k)) => target.mul(map[p], images[k]),
            };
        }
        let hom = (0..self.n).all(|x| {
            gens.iter()
                .zip(images)
                .all(|(&g, &h)| map[self.mul(x, g)] == target.mul(map[x], h))
        });
        hom.then_some(map)
    }

    /// All homomorphisms `self -> target` sending the generators to elements
    /// of matching orders, found by backtracking. `f` is called for each and
    /// may stop the search by returning `true`.
    pub(crate) fn search_homomorphisms<F>(&self, target: &FiniteGroup, injective: bool, mut f: F)
    where
        F: FnMut(&[usize]) -> bool,
    {
        let gens = self.generators();
        let orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let candidates: Vec<Vec<usize>> = orders
            .iter()
            .map(|&o| {
                (0..target.n)
                    .filter(|&y| {
                        let oy = target.element_order(y);
                        if injective {
                            oy == o
                        } else {
                            o % oy == 0
                        }
                    })
                    .collect()
            })
            .collect();
        let mut images = vec![0; gens.len()];
        fn rec<F: FnMut(&[usize]) -> bool>(
            k: usize,
            src: &FiniteGroup,
            target: &FiniteGroup,
            gens: &[usize],
            candidates: &[Vec<usize>],
            images: &mut Vec<usize>,
            injective: bool,
            f: &mut F,
        ) -> bool {
            if k == gens.len() {
                if let Some(map) = src.extend_homomorphism(target, gens, images) {
                    if !injective || is_injective(&map, target.n) {
                        return f(&map);
                    }
                }
                return false;
            }
            for &c in &candidates[k] {
                images[k] = c;
                if rec(k + 1, src, target, gens, candidates, images, injective, f) {
                    return true;
                }
            }
            false
        }
        rec(
            0,
            self,
            target,
            &gens,
            &candidates,
            &mut images,
            injective,
            &mut f,
        );
    }

    /// An isomorphism `self -> other`, if one exists.
    pub fn find_isomorphism(&self, other: &FiniteGroup) -> Option<Vec<usize>> {
        if self.n != other.n || self.order_profile() != other.order_profile() {
            return None;
        }
        let mut found = None;
        self.search_homomorphisms(other, true, |m| {
            found = Some(m.to_vec());
            true
        });
        found
    }

    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        self.find_isomorphism(other).is_some()
    }

    /// Every automorphism, as element permutations.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.search_homomorphisms(self, true, |m| {
            out.push(m.to_vec());
            false
        });
        out
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.n).map(|x| self.element_order(x)).collect();
        v.sort_unstable();
        v
    }

    /// Whether `perm` is an automorphism of `self`.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        perm.len() == self.n && is_injective(perm, self.n) && self.is_homomorphism(self, perm)
    }
}

pub(crate) fn is_injective(map: &[usize], target_order: usize) -> bool {
    let mut seen = vec![false; target_order];
    map.iter()
        .all(|&y| y < target_order && !std::mem::replace(&mut seen[y], true))
}

/// `G x| W` with `(g, w)` at index `w * |G| + g` and
/// `(g, w)(g', w') = (g * w(g'), w w')`, together with the canonical maps.
#[derive(Clone, Debug)]
pub struct SemidirectProduct {
    pub group: FiniteGroup,
    /// `G -> G x| W`
    pub i: Vec<usize>,
    /// `G x| W -> W`
    pub p: Vec<usize>,
    /// `W -> G x| W`
    pub s: Vec<usize>,
    /// `G x| W -> G`, the first coordinate (not a homomorphism).
    pub first: Vec<usize>,
}

/// `action[w]` is the automorphism of `g` by which `w` acts.
pub fn semidirect(
    g: &FiniteGroup,
    w: &FiniteGroup,
    action: &[Vec<usize>],
) -> Result<SemidirectProduct, GcohError> {
    if action.len() != w.order() {
        return Err(GcohError::InvalidAction(
            "one automorphism per element of W".into(),
        ));
    }
    for (k, a) in action.iter().enumerate() {
        if !g.is_automorphism(a) {
            return Err(GcohError::InvalidAction(format!(
                "element {k} does not act by an automorphism"
            )));
        }
    }
    for a in 0..w.order() {
        for b in 0..w.order() {
            let ab = &action[w.mul(a, b)];
            if (0..g.order()).any(|x| ab[x] != action[a][action[b][x]]) {
                return Err(GcohError::InvalidAction(format!(
                    "action is not a homomorphism at ({a}, {b})"
                )));
            }
        }
    }
    let (ng, nw) = (g.order(), w.order());
    let n = ng * nw;
    let mut table = vec![0; n * n];
    for x in 0..n {
        let (g1, w1) = (x % ng, x / ng);
        for y in 0..n {
            let (g2, w2) = (y % ng, y / ng);
            table[x * n + y] = w.mul(w1, w2) * ng + g.mul(g1, action[w1][g2]);
        }
    }
    let identity = w.identity() * ng + g.identity();
    Ok(SemidirectProduct {
        group: FiniteGroup::from_flat(n, table, identity),
        i: (0..ng).map(|x| w.identity() * ng + x).collect(),
        p: (0..n).map(|x| x / ng).collect(),
        s: (0..nw).map(|k| k * ng + g.identity()).collect(),
        first: (0..n).map(|x| x % ng).collect(),
    })
}

/// Powers of one automorphism, as the action of `Z/m` on `g`.
pub fn cyclic_action(g: &FiniteGroup, phi: &[usize], m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![(0..g.order()).collect::<Vec<usize>>()];
    for k in 1..m {
        let prev = &out[k - 1];
        out.push(prev.iter().map(|&x| phi[x]).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_products() {
        let c4 = FiniteGroup::cyclic(4);
        assert_eq!(c4.element_order(1), 4);
        assert_eq!(c4.inv(1), 3);
        let v = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2));
        assert_eq!(v.order_profile(), vec![1, 2, 2, 2]);
        assert!(!v.is_isomorphic(&c4));
        let c6 = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(3));
        assert!(c6.is_isomorphic(&FiniteGroup::cyclic(6)));
    }

    #[test]
    fn table_validation() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]).is_ok());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1]]).is_err());
        // a quasigroup that is not associative
        let t = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]];
        assert!(FiniteGroup::from_table(t).is_err());
    }

    #[test]
    fn inversion_on_c3_gives_s3() {
        let c3 = FiniteGroup::cyclic(3);
        let c2 = FiniteGroup::cyclic(2);
        let sd = semidirect(&c3, &c2, &cyclic_action(&c3, &[0, 2, 1], 2)).unwrap();
        assert!(!sd.group.is_abelian());
        let s3 = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 100).unwrap();
        assert!(sd.group.is_isomorphic(&s3));
        assert!(sd.group.is_homomorphism(&c2, &sd.p));
        assert!(c3.is_homomorphism(&sd.group, &sd.i));
        assert!(c2.is_homomorphism(&sd.group, &sd.s));
    }

    #[test]
    fn trivial_action_gives_direct_product() {
        let c2 = FiniteGroup::cyclic(2);
        let c3 = FiniteGroup::cyclic(3);
        let sd = semidirect(&c3, &c2, &cyclic_action(&c3, &[0, 1, 2], 2)).unwrap();
        assert!(sd.group.is_isomorphic(&FiniteGroup::cyclic(6)));
    }

    #[test]
    fn invalid_actions() {
        let c3 = FiniteGroup::cyclic(3);
        let c2 = FiniteGroup::cyclic(2);
        assert!(semidirect(&c3, &c2, &cyclic_action(&c3, &[0, 2, 0], 2)).is_err());
        // an automorphism of order 2 cannot be the image of a generator of C3
        let c3w = FiniteGroup::cyclic(3);
        assert!(semidirect(&c3, &c3w, &cyclic_action(&c3, &[0, 2, 1], 3)).is_err());
    }

    #[test]
    fn quotients_and_closures() {
        let s3 = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 100).unwrap();
        let t = s3.generators();
        assert_eq!(s3.subgroup_generated(&t).len(), 6);
        let three = (0..6).find(|&x| s3.element_order(x) == 3).unwrap();
        let a3 = s3.subgroup_generated(&[three]);
        assert!(s3.is_normal(&a3));
        let (q, p) = s3.quotient(&a3);
        assert_eq!(q.order(), 2);
        assert!(s3.is_homomorphism(&q, &p));
        let two = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        assert_eq!(s3.normal_closure(&[two]).len(), 6);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(FiniteGroup::cyclic(5).automorphisms().len(), 4);
        let v = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2));
        assert_eq!(v.automorphisms().len(), 6);
    }
}
