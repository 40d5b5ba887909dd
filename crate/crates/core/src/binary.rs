//! Certificate constructions for 0/1 polytopes.
//!
//! Every routine checks that `h` lies in the relaxation, lays out one set
//! per variable and returns an unverified [`Certificate`]; verification is
//! the caller's job.

use std::collections::BTreeSet;

use crate::certificate::Certificate;
use crate::error::{precondition, Error, Result};
use crate::interval::IntervalSet;
use crate::lp::{transportation_feasible, Transport};
use crate::model::{ConstraintSystem, Sense, VarKind};
use crate::rect::RectSet;
use crate::scalar::Scalar;

/// Lifts interval sets to height-1 rectangle sets.
pub(crate) fn unit_sets<T: Scalar>(sets: Vec<IntervalSet<T>>) -> Vec<RectSet<T>> {
    sets.iter().map(|s| RectSet::from_intervals(s, T::one())).collect()
}

/// Checks `h` against `relaxation`, naming the first violated inequality.
pub(crate) fn require_in<T: Scalar>(routine: &'static str, relaxation: &ConstraintSystem<T>, h: &[T]) -> Result<()> {
    if h.len() != relaxation.dim() {
        return Err(Error::DimensionMismatch {
            expected: relaxation.dim(),
            got: h.len(),
        });
    }
    match relaxation.describe_relaxation_failure(h) {
        None => Ok(()),
        Some(why) => Err(precondition(routine, why)),
    }
}

pub(crate) fn ones<T: Scalar>(vars: impl IntoIterator<Item = usize>) -> Vec<(usize, T)> {
    vars.into_iter().map(|v| (v, T::one())).collect()
}

/// `[t, t + a)` modulo 1; a full-length request takes all of `[0, 1)`.
pub(crate) fn place<T: Scalar>(t: &T, a: &T) -> Result<(IntervalSet<T>, T)> {
    if *a >= T::one() {
        Ok((IntervalSet::full(), t.clone()))
    } else {
        IntervalSet::wrap_place(t, a)
    }
}

// ---------------------------------------------------------------- McCormick

/// `x, y, z ∈ {0, 1}` with `z ≤ x`, `z ≤ y`, `x + y − z ≤ 1`.
pub fn mccormick_system<T: Scalar>() -> ConstraintSystem<T> {
    let mut s = ConstraintSystem::new();
    let x = s.add_var("x", VarKind::Binary);
    let y = s.add_var("y", VarKind::Binary);
    let z = s.add_var("z", VarKind::Binary);
    s.add_linear(vec![(z, T::one()), (x, -T::one())], Sense::Le, T::zero());
    s.add_linear(vec![(z, T::one()), (y, -T::one())], Sense::Le, T::zero());
    s.add_linear(vec![(x, T::one()), (y, T::one()), (z, -T::one())], Sense::Le, T::one());
    s
}

/// `S_x = [0, x)`, `S_z = [x − z, x)`, `S_y = [x − z, x − z + y)`.
pub fn mccormick<T: Scalar>(h: &[T]) -> Result<Certificate<T>> {
    let sys = mccormick_system();
    require_in("mccormick", &sys, h)?;
    let (x, y, z) = (h[0].clone(), h[1].clone(), h[2].clone());
    let start = x.clone() - z;
    let sets = vec![
        IntervalSet::span(T::zero(), x.clone()),
        IntervalSet::span(start.clone(), start.clone() + y),
        IntervalSet::span(start, x),
    ];
    Ok(Certificate::new(sys, unit_sets(sets), h.to_vec()).with_meta("routine", "mccormick"))
}

// ---------------------------------------------------------------------- Box

/// `n` free binaries.
pub fn box_system<T: Scalar>(n: usize) -> ConstraintSystem<T> {
    let mut s = ConstraintSystem::new();
    for i in 0..n {
        s.add_var(format!("x{}", i + 1), VarKind::Binary);
    }
    s
}

/// Every set anchored at 0.
pub fn box_a<T: Scalar>(h: &[T]) -> Result<Certificate<T>> {
    let sys = box_system(h.len());
    require_in("box_a", &sys, h)?;
    let sets = h.iter().map(|v| IntervalSet::span(T::zero(), v.clone())).collect();
    Ok(Certificate::new(sys, unit_sets(sets), h.to_vec()).with_meta("routine", "box-a"))
}

/// Anchoring alternates: the 1st, 3rd, ... set at 0, the 2nd, 4th, ... at 1.
pub fn box_b<T: Scalar>(h: &[T]) -> Result<Certificate<T>> {
    let sys = box_system(h.len());
    require_in("box_b", &sys, h)?;
    let sets = h
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if i % 2 == 0 {
                IntervalSet::span(T::zero(), v.clone())
            } else {
                IntervalSet::span(T::one() - v.clone(), T::one())
            }
        })
        .collect();
    Ok(Certificate::new(sys, unit_sets(sets), h.to_vec()).with_meta("routine", "box-b"))
}

// ------------------------------------------------------------ Shortest path

/// Directed acyclic graph with a source that has no incoming arcs and a sink
/// with no outgoing arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    pub nodes: usize,
    pub arcs: Vec<(usize, usize)>,
    pub source: usize,
    pub sink: usize,
    order: Vec<usize>,
}

impl Dag {
    pub fn new(nodes: usize, arcs: Vec<(usize, usize)>, source: usize, sink: usize) -> Result<Self> {
        let bad = |d: String| {
            Err(Error::Mode {
                routine: "shortest_path",
                detail: d,
            })
        };
        if source >= nodes || sink >= nodes || source == sink {
            return bad(format!("source {source} / sink {sink} invalid for {nodes} nodes"));
        }
        if let Some((u, v)) = arcs.iter().find(|(u, v)| *u >= nodes || *v >= nodes || u == v) {
            return bad(format!("arc ({u}, {v}) is invalid"));
        }
        if arcs.iter().any(|(_, v)| *v == source) {
            return bad("the source has an incoming arc".into());
        }
        if arcs.iter().any(|(u, _)| *u == sink) {
            return bad("the sink has an outgoing arc".into());
        }
        // Kahn's algorithm, smallest ready node first.
        let mut indeg = vec![0usize; nodes];
        for (_, v) in &arcs {
            indeg[*v] += 1;
        }
        let mut ready: BTreeSet<usize> = (0..nodes).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(nodes);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for (_, w) in arcs.iter().filter(|(u, _)| *u == v) {
                indeg[*w] -= 1;
                if indeg[*w] == 0 {
                    ready.insert(*w);
                }
            }
        }
        if order.len() < nodes {
            return bad("the graph has a directed cycle".into());
        }
        Ok(Self {
            nodes,
            arcs,
            source,
            sink,
            order,
        })
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    pub fn out_arcs(&self, v: usize) -> Vec<usize> {
        (0..self.arcs.len()).filter(|&a| self.arcs[a].0 == v).collect()
    }

    pub fn in_arcs(&self, v: usize) -> Vec<usize> {
        (0..self.arcs.len()).filter(|&a| self.arcs[a].1 == v).collect()
    }

    /// One binary per arc with unit outflow at the source, unit inflow at
    /// the sink, and conservation elsewhere.
    pub fn system<T: Scalar>(&self) -> ConstraintSystem<T> {
        let mut s = ConstraintSystem::new();
        for a in 0..self.arcs.len() {
            s.add_var(format!("a{}", a + 1), VarKind::Binary);
        }
        s.add_linear(ones(self.out_arcs(self.source)), Sense::Eq, T::one());
        for v in (0..self.nodes).filter(|&v| v != self.source && v != self.sink) {
            let mut row: Vec<(usize, T)> = ones(self.out_arcs(v));
            row.extend(self.in_arcs(v).into_iter().map(|a| (a, -T::one())));
            if !row.is_empty() {
                s.add_linear(row, Sense::Eq, T::zero());
            }
        }
        s.add_linear(ones(self.in_arcs(self.sink)), Sense::Eq, T::one());
        s
    }
}

/// Topological sweep: each node splits the union of its incoming sets (all
/// of `[0, 1)` at the source) among its outgoing arcs, in arc order.
pub fn shortest_path<T: Scalar>(dag: &Dag, h: &[T]) -> Result<Certificate<T>> {
    let sys = dag.system();
    require_in("shortest_path", &sys, h)?;
    let mut sets = vec![IntervalSet::empty(); dag.arcs.len()];
    for &v in dag.topological_order() {
        let out = dag.out_arcs(v);
        if out.is_empty() {
            continue;
        }
        let pool = if v == dag.source {
            IntervalSet::full()
        } else {
            dag.in_arcs(v)
                .iter()
                .fold(IntervalSet::empty(), |acc, &a| acc.union(&sets[a]))
        };
        let weights: Vec<T> = out.iter().map(|&a| h[a].clone()).collect();
        for (a, s) in out.into_iter().zip(pool.match_weights(&weights)?) {
            sets[a] = s;
        }
    }
    let order: Vec<String> = dag.topological_order().iter().map(|v| v.to_string()).collect();
    Ok(Certificate::new(sys, unit_sets(sets), h.to_vec())
        .with_meta("routine", "shortest-path")
        .with_meta("node-order", order.join(",")))
}

// --------------------------------------------------------------------- CPMC

/// An `m`-partite compatibility graph: nodes `0..n` split into classes, and
/// edges between compatible nodes of different classes. Listing order
/// inside a class is the class's total order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cpmc {
    pub classes: Vec<Vec<usize>>,
    pub edges: BTreeSet<(usize, usize)>,
    class_of: Vec<usize>,
}

impl Cpmc {
    pub fn new(classes: Vec<Vec<usize>>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n: usize = classes.iter().map(Vec::len).sum();
        let mut class_of = vec![usize::MAX; n];
        for (c, members) in classes.iter().enumerate() {
            for &v in members {
                if v >= n || class_of[v] != usize::MAX {
                    return Err(Error::Domain(format!(
                        "classes must partition 0..{n}; node {v} is out of range or repeated"
                    )));
                }
                class_of[v] = c;
            }
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n || class_of[u] == class_of[v] {
                return Err(Error::Domain(format!("edge ({u}, {v}) must join two classes")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self {
            classes,
            edges: set,
            class_of,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn compatible(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Class pairs whose induced bipartite subgraph is not complete.
    pub fn dependency_edges(&self) -> Vec<(usize, usize)> {
        let m = self.classes.len();
        let mut out = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let dependent = self.classes[i]
                    .iter()
                    .any(|&u| self.classes[j].iter().any(|&v| !self.compatible(u, v)));
                if dependent {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// One binary per node; one node per class; incompatible pairs exclude
    /// each other.
    pub fn system<T: Scalar>(&self) -> ConstraintSystem<T> {
        let mut s = ConstraintSystem::new();
        for v in 0..self.num_nodes() {
            s.add_var(format!("v{}", v + 1), VarKind::Binary);
        }
        for class in &self.classes {
            s.add_linear(ones(class.iter().copied()), Sense::Eq, T::one());
        }
        for u in 0..self.num_nodes() {
            for v in u + 1..self.num_nodes() {
                if self.class_of[u] != self.class_of[v] && !self.compatible(u, v) {
                    s.add_linear(ones([u, v]), Sense::Le, T::one());
                }
            }
        }
        s
    }

    /// Maximal stable sets of the compatibility graph (Bron–Kerbosch on its
    /// complement), each sorted, in discovery order.
    pub fn maximal_stable_sets(&self) -> Vec<Vec<usize>> {
        let n = self.num_nodes();
        assert!(n <= 64, "stable-set enumeration supports at most 64 nodes");
        // In the complement, u ~ v iff u and v are not compatible.
        let nbr: Vec<u64> = (0..n)
            .map(|u| {
                (0..n)
                    .filter(|&v| v != u && !self.compatible(u, v))
                    .fold(0u64, |m, v| m | (1 << v))
            })
            .collect();
        let mut out = Vec::new();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        bron_kerbosch(0, all, 0, &nbr, &mut out);
        out
    }

    /// Multiple-choice equalities plus `Σ_{v∈C} x_v ≤ 1` for every maximal
    /// stable set `C` that meets at least two classes.
    pub fn stable_set_relaxation<T: Scalar>(&self) -> ConstraintSystem<T> {
        let mut s = ConstraintSystem::new();
        for v in 0..self.num_nodes() {
            s.add_var(format!("v{}", v + 1), VarKind::Continuous);
        }
        for class in &self.classes {
            s.add_linear(ones(class.iter().copied()), Sense::Eq, T::one());
        }
        for c in self.maximal_stable_sets() {
            let spans_classes = c.iter().any(|&v| self.class_of[v] != self.class_of[c[0]]);
            if spans_classes {
                s.add_linear(ones(c), Sense::Le, T::one());
            }
        }
        s
    }

    /// Reason the listed class orders are not a staircase ordering, if any.
    /// Also rejects nodes with no compatible node in some other class.
    pub fn staircase_violation(&self) -> Option<String> {
        let m = self.classes.len();
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                let (vi, vj) = (&self.classes[i], &self.classes[j]);
                for &u in vi {
                    let adj: Vec<usize> = (0..vj.len()).filter(|&k| self.compatible(u, vj[k])).collect();
                    let Some((&first, &last)) = adj.first().zip(adj.last()) else {
                        return Some(format!("node {u} has no compatible node in class {}", j + 1));
                    };
                    if last - first + 1 != adj.len() {
                        return Some(format!("neighbours of node {u} in class {} are not consecutive", j + 1));
                    }
                }
                for a in 0..vi.len() {
                    for b in a + 1..vi.len() {
                        for c in 0..vj.len() {
                            for d in c + 1..vj.len() {
                                let (u1, u2, v1, v2) = (vi[a], vi[b], vj[c], vj[d]);
                                if self.compatible(u1, v2)
                                    && self.compatible(u2, v1)
                                    && !(self.compatible(u1, v1) && self.compatible(u2, v2))
                                {
                                    return Some(format!(
                                        "crossing edges ({u1}, {v2}) and ({u2}, {v1}) without ({u1}, {v1}) and ({u2}, {v2})"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Smallest node of class `j` compatible with `v`.
    fn min_compatible(&self, v: usize, j: usize) -> Option<usize> {
        self.classes[j].iter().position(|&w| self.compatible(v, w))
    }

    /// Multiple-choice equalities plus the comparison inequalities
    /// `Σ_{u ≥_i v} x_u ≤ Σ_{w ≥_j min(v, V_j)} x_w`.
    pub fn staircase_relaxation<T: Scalar>(&self) -> ConstraintSystem<T> {
        let mut s = ConstraintSystem::new();
        for v in 0..self.num_nodes() {
            s.add_var(format!("v{}", v + 1), VarKind::Continuous);
        }
        for class in &self.classes {
            s.add_linear(ones(class.iter().copied()), Sense::Eq, T::one());
        }
        for (i, vi) in self.classes.iter().enumerate() {
            for (pos, &v) in vi.iter().enumerate() {
                for j in (0..self.classes.len()).filter(|&j| j != i) {
                    let mut row: Vec<(usize, T)> = ones(vi[pos..].iter().copied());
                    if let Some(k) = self.min_compatible(v, j) {
                        row.extend(self.classes[j][k..].iter().map(|&w| (w, -T::one())));
                    }
                    s.add_linear(row, Sense::Le, T::zero());
                }
            }
        }
        s
    }
}

fn bron_kerbosch(r: u64, mut p: u64, mut x: u64, nbr: &[u64], out: &mut Vec<Vec<usize>>) {
    if p == 0 && x == 0 {
        out.push((0..nbr.len()).filter(|&v| r >> v & 1 == 1).collect());
        return;
    }
    let pivot = (p | x).trailing_zeros() as usize;
    let mut candidates = p & !nbr[pivot];
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        bron_kerbosch(r | 1 << v, p & nbr[v], x & nbr[v], nbr, out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// Forest-shaped dependency graph: each tree's root class is laid out on
/// `[0, 1)`; along every tree edge a transportation problem over compatible
/// pairs decides how much of each parent set each child node receives.
pub fn cpmc_forest<T: Scalar>(inst: &Cpmc, h: &[T]) -> Result<Certificate<T>> {
    const ROUTINE: &str = "cpmc_forest";
    let m = inst.classes.len();
    let deps = inst.dependency_edges();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], v: usize) -> usize {
        if p[v] != v {
            let r = find(p, p[v]);
            p[v] = r;
        }
        p[v]
    }
    for &(i, j) in &deps {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a == b {
            return Err(Error::Mode {
                routine: ROUTINE,
                detail: format!("dependency graph has a cycle through classes {} and {}", i + 1, j + 1),
            });
        }
        parent[a] = b;
    }
    require_in(ROUTINE, &inst.stable_set_relaxation(), h)?;

    let mut sets: Vec<IntervalSet<T>> = vec![IntervalSet::empty(); inst.num_nodes()];
    let mut placed = vec![false; m];
    let mut visit_order = Vec::new();
    for root in 0..m {
        if placed[root] {
            continue;
        }
        let weights: Vec<T> = inst.classes[root].iter().map(|&v| h[v].clone()).collect();
        for (&v, s) in inst.classes[root]
            .iter()
            .zip(IntervalSet::full().match_weights(&weights)?)
        {
            sets[v] = s;
        }
        placed[root] = true;
        visit_order.push(root);
        let mut stack = vec![root];
        while let Some(p) = stack.pop() {
            for &(i, j) in &deps {
                let c = match (i == p, j == p) {
                    (true, _) => j,
                    (_, true) => i,
                    _ => continue,
                };
                if placed[c] {
                    continue;
                }
                carve_child(inst, h, &mut sets, p, c)?;
                placed[c] = true;
                visit_order.push(c);
                stack.push(c);
            }
        }
    }
    let order: Vec<String> = visit_order.iter().map(|c| (c + 1).to_string()).collect();
    Ok(Certificate::new(inst.system(), unit_sets(sets), h.to_vec())
        .with_meta("routine", "cpmc-forest")
        .with_meta("class-order", order.join(",")))
}

fn carve_child<T: Scalar>(
    inst: &Cpmc,
    h: &[T],
    sets: &mut [IntervalSet<T>],
    parent: usize,
    child: usize,
) -> Result<()> {
    let (vp, vc) = (&inst.classes[parent], &inst.classes[child]);
    let rows: Vec<T> = vp.iter().map(|&v| h[v].clone()).collect();
    let cols: Vec<T> = vc.iter().map(|&v| h[v].clone()).collect();
    let allowed: Vec<(usize, usize)> = (0..vp.len())
        .flat_map(|a| (0..vc.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| inst.compatible(vp[a], vc[b]))
        .collect();
    let flow = match transportation_feasible(&rows, &cols, &allowed)? {
        Transport::Flow(f) => f,
        Transport::Infeasible(cut) => {
            return Err(Error::TransportInfeasible {
                weight: cut.weight.to_text(),
            })
        }
    };
    for &v in vc {
        sets[v] = IntervalSet::empty();
    }
    for (a, &u) in vp.iter().enumerate() {
        let weights: Vec<T> = (0..vc.len())
            .map(|b| {
                allowed
                    .iter()
                    .position(|&e| e == (a, b))
                    .map_or_else(T::zero, |k| flow[k].clone())
            })
            .collect();
        let pieces = sets[u].match_weights(&weights)?;
        for (b, piece) in pieces.into_iter().enumerate() {
            sets[vc[b]] = sets[vc[b]].union(&piece);
        }
    }
    Ok(())
}

/// Staircase-compatible classes: each class laid out consecutively on
/// `[0, 1)` following its order.
pub fn cpmc_staircase<T: Scalar>(inst: &Cpmc, h: &[T]) -> Result<Certificate<T>> {
    const ROUTINE: &str = "cpmc_staircase";
    if let Some(why) = inst.staircase_violation() {
        return Err(Error::Mode {
            routine: ROUTINE,
            detail: why,
        });
    }
    require_in(ROUTINE, &inst.staircase_relaxation(), h)?;
    let mut sets = vec![IntervalSet::empty(); inst.num_nodes()];
    for class in &inst.classes {
        let weights: Vec<T> = class.iter().map(|&v| h[v].clone()).collect();
        for (&v, s) in class.iter().zip(IntervalSet::full().match_weights(&weights)?) {
            sets[v] = s;
        }
    }
    Ok(Certificate::new(inst.system(), unit_sets(sets), h.to_vec()).with_meta("routine", "cpmc-staircase"))
}

// ---------------------------------------------------------------- Odd cycle

/// Stable sets of an odd cycle `0 – 1 – … – (n−1) – 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OddCycle {
    pub len: usize,
}

impl OddCycle {
    pub fn new(len: usize) -> Result<Self> {
        if len < 3 || len.is_multiple_of(2) {
            return Err(Error::Domain(format!("cycle length {len} must be odd and at least 3")));
        }
        Ok(Self { len })
    }

    /// Edge inequalities plus `Σ x ≤ (n − 1) / 2`.
    pub fn system<T: Scalar>(&self) -> ConstraintSystem<T> {
        let n = self.len;
        let mut s = ConstraintSystem::new();
        for v in 0..n {
            s.add_var(format!("u{}", v + 1), VarKind::Binary);
        }
        for v in 0..n {
            s.add_linear(ones([v, (v + 1) % n]), Sense::Le, T::one());
        }
        s.add_linear(ones(0..n), Sense::Le, T::from_i64(((n - 1) / 2) as i64));
        s
    }

    /// Greedily raises each coordinate in cycle order until an edge
    /// inequality or the cycle inequality becomes tight.
    pub fn blow_up<T: Scalar>(&self, h: &[T]) -> Vec<T> {
        let n = self.len;
        let cap = T::from_i64(((n - 1) / 2) as i64);
        let mut bar = h.to_vec();
        for v in 0..n {
            let sum = bar.iter().cloned().fold(T::zero(), |a, b| a + b);
            let r = cap.clone() - sum;
            let prev = T::one() - bar[(v + n - 1) % n].clone();
            let next = T::one() - bar[(v + 1) % n].clone();
            bar[v] = T::min_of(T::min_of(prev, next), bar[v].clone() + r);
        }
        bar
    }
}

/// Blow `h` up to the boundary, place the enlarged sets consecutively
/// modulo 1 along the cycle, then shrink each back to measure `h_v`.
pub fn odd_cycle_stable_set<T: Scalar>(inst: &OddCycle, h: &[T]) -> Result<Certificate<T>> {
    let sys = inst.system();
    require_in("odd_cycle_stable_set", &sys, h)?;
    let bar = inst.blow_up(h);
    let mut t = T::zero();
    let mut sets = Vec::with_capacity(inst.len);
    for (v, hb) in bar.iter().enumerate() {
        let (enlarged, next) = place(&t, hb)?;
        t = next;
        let shrunk = enlarged.match_weights(std::slice::from_ref(&h[v]))?;
        sets.push(shrunk.into_iter().next().expect("one weight"));
    }
    let shown: Vec<String> = bar.iter().map(|v| v.to_text()).collect();
    Ok(Certificate::new(sys, unit_sets(sets), h.to_vec())
        .with_meta("routine", "odd-cycle")
        .with_meta("blow-up", shown.join(",")))
}

// ---------------------------------------------------------------- Bipartite

/// Stable sets of a bipartite graph with parts `U = 0..left` and
/// `W = 0..right`; edges are `(u, w)` pairs. Variables list `U` then `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartite {
    pub left: usize,
    pub right: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Bipartite {
    pub fn new(left: usize, right: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some((u, w)) = edges.iter().find(|(u, w)| *u >= left || *w >= right) {
            return Err(Error::Domain(format!("edge ({u}, {w}) out of range")));
        }
        Ok(Self { left, right, edges })
    }

    pub fn system<T: Scalar>(&self) -> ConstraintSystem<T> {
        let mut s = ConstraintSystem::new();
        for u in 0..self.left {
            s.add_var(format!("u{}", u + 1), VarKind::Binary);
        }
        for w in 0..self.right {
            s.add_var(format!("w{}", w + 1), VarKind::Binary);
        }
        for &(u, w) in &self.edges {
            s.add_linear(ones([u, self.left + w]), Sense::Le, T::one());
        }
        s
    }
}

/// `S_u = [0, h_u)`, `S_w = [1 − h_w, 1)`.
pub fn bipartite_stable_set<T: Scalar>(inst: &Bipartite, h: &[T]) -> Result<Certificate<T>> {
    let sys = inst.system();
    require_in("bipartite_stable_set", &sys, h)?;
    let sets = h
        .iter()
        .enumerate()
        .map(|(k, v)| {
            if k < inst.left {
                IntervalSet::span(T::zero(), v.clone())
            } else {
                IntervalSet::span(T::one() - v.clone(), T::one())
            }
        })
        .collect();
    Ok(Certificate::new(sys, unit_sets(sets), h.to_vec()).with_meta("routine", "bipartite-stable-set"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Q};

    fn v(s: &[&str]) -> Vec<Q> {
        s.iter().map(|x| q(x)).collect()
    }

    fn support(cert: &Certificate<Q>) -> Vec<(Vec<Q>, Q)> {
        let report = cert.verify();
        assert!(report.passed(), "{:?}", report.describe(&cert.system));
        let comb = cert.extract().unwrap();
        assert_eq!(comb.reconstruct(), cert.target);
        comb.support
    }

    fn bits(s: &str) -> Vec<Q> {
        s.chars().map(|c| qi(i64::from(c == '1'))).collect()
    }

    #[test]
    fn mccormick_examples() {
        let cert = mccormick(&v(&["0.5", "0.7", "0.2"])).unwrap();
        assert_eq!(
            support(&cert),
            vec![
                (bits("100"), q("0.3")),
                (bits("111"), q("0.2")),
                (bits("010"), q("0.5"))
            ]
        );
        assert_eq!(support(&mccormick(&bits("111")).unwrap()), vec![(bits("111"), qi(1))]);
        support(&mccormick(&v(&["0.5", "0.5", "0.25"])).unwrap());
        let err = mccormick(&v(&["0", "1", "1"])).unwrap_err();
        assert!(err.to_string().contains("z - x <= 0"), "{err}");
    }

    #[test]
    fn box_examples() {
        let h = v(&["0.5", "0.5"]);
        assert_eq!(
            support(&box_a(&h).unwrap()),
            vec![(bits("11"), q("0.5")), (bits("00"), q("0.5"))]
        );
        assert_eq!(
            support(&box_b(&h).unwrap()),
            vec![(bits("10"), q("0.5")), (bits("01"), q("0.5"))]
        );
        assert_eq!(support(&box_a(&bits("10")).unwrap()), vec![(bits("10"), qi(1))]);
        assert!(box_a(&v(&["1.5"])).is_err());
    }

    fn example_dag() -> Dag {
        // s = 0, then the middle row 1, 2, the sink 3, the upper node 4 and the lower node 5.
        Dag::new(
            6,
            vec![(0, 1), (1, 2), (2, 3), (4, 3), (5, 3), (1, 4), (1, 5), (0, 4)],
            0,
            3,
        )
        .unwrap()
    }

    #[test]
    fn shortest_path_worked_example() {
        let h = v(&["0.8", "0.1", "0.1", "0.6", "0.3", "0.4", "0.3", "0.2"]);
        let sup = support(&shortest_path(&example_dag(), &h).unwrap());
        let mut paths: Vec<Vec<Q>> = sup.into_iter().map(|(p, _)| p).collect();
        paths.sort();
        let mut expected = vec![bits("11100000"), bits("00010001"), bits("10001010"), bits("10010100")];
        expected.sort();
        assert_eq!(paths, expected);
        assert_eq!(
            support(&shortest_path(&example_dag(), &bits("00010001")).unwrap()).len(),
            1
        );
    }

    #[test]
    fn dag_validation() {
        assert!(Dag::new(3, vec![(0, 1), (1, 2), (2, 1)], 0, 2).is_err());
        assert!(Dag::new(3, vec![(1, 0), (1, 2)], 0, 2).is_err());
        assert!(shortest_path(&example_dag(), &v(&["1", "0", "0", "0", "0", "0", "0", "0"])).is_err());
    }

    fn two_pair_cpmc() -> Cpmc {
        Cpmc::new(vec![vec![0, 1], vec![2, 3]], [(0, 2), (1, 3)]).unwrap()
    }

    #[test]
    fn cpmc_forest_two_classes() {
        let inst = two_pair_cpmc();
        assert_eq!(inst.dependency_edges(), vec![(0, 1)]);
        let sup = support(&cpmc_forest(&inst, &v(&["0.5", "0.5", "0.5", "0.5"])).unwrap());
        assert_eq!(sup, vec![(bits("1010"), q("0.5")), (bits("0101"), q("0.5"))]);
        assert_eq!(
            support(&cpmc_forest(&inst, &bits("0101")).unwrap()),
            vec![(bits("0101"), qi(1))]
        );
    }

    #[test]
    fn cpmc_forest_rejects_cycles_and_stable_set_violations() {
        // Three classes pairwise dependent form a triangle.
        let tri = Cpmc::new(vec![vec![0, 1], vec![2, 3], vec![4, 5]], [(0, 2), (2, 4), (0, 4)]).unwrap();
        assert!(matches!(cpmc_forest(&tri, &bits("101010")), Err(Error::Mode { .. })));
        let inst = two_pair_cpmc();
        // {0, 3} is stable with weight 1.2.
        assert!(matches!(
            cpmc_forest(&inst, &v(&["0.6", "0.4", "0.4", "0.6"])),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn stable_sets_are_maximal() {
        let inst = two_pair_cpmc();
        let mut sets = inst.maximal_stable_sets();
        sets.sort();
        assert_eq!(sets, vec![vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]]);
    }

    fn chains() -> Cpmc {
        // Two chains of length 2 with full staircase compatibility.
        Cpmc::new(vec![vec![0, 1], vec![2, 3]], [(0, 2), (0, 3), (1, 3)]).unwrap()
    }

    #[test]
    fn staircase_examples() {
        let inst = chains();
        assert_eq!(inst.staircase_violation(), None);
        let h = v(&["0.5", "0.5", "0.5", "0.5"]);
        support(&cpmc_staircase(&inst, &h).unwrap());
        assert_eq!(
            support(&cpmc_staircase(&inst, &bits("1010")).unwrap()),
            vec![(bits("1010"), qi(1))]
        );
        // x_1 = 1 needs x_3 >= 1 by comparison.
        assert!(cpmc_staircase(&inst, &bits("0110")).is_err());
        let crossing = Cpmc::new(vec![vec![0, 1], vec![2, 3]], [(0, 3), (1, 2)]).unwrap();
        assert!(matches!(
            cpmc_staircase(&crossing, &v(&["0.5", "0.5", "0.5", "0.5"])),
            Err(Error::Mode { .. })
        ));
    }

    #[test]
    fn odd_cycle_worked_example() {
        let c5 = OddCycle::new(5).unwrap();
        let h = v(&["0.5", "0.2", "0.3", "0.1", "0.1"]);
        assert_eq!(c5.blow_up(&h), v(&["0.8", "0.2", "0.8", "0.1", "0.1"]));
        let sup = support(&odd_cycle_stable_set(&c5, &h).unwrap());
        let sets: Vec<Vec<Q>> = sup.into_iter().map(|(p, _)| p).collect();
        assert_eq!(
            sets,
            vec![
                bits("10100"),
                bits("10000"),
                bits("00000"),
                bits("01010"),
                bits("01001")
            ]
        );
        let zero = vec![qi(0); 5];
        assert_eq!(
            support(&odd_cycle_stable_set(&c5, &zero).unwrap()),
            vec![(zero.clone(), qi(1))]
        );
        assert!(OddCycle::new(4).is_err());
    }

    #[test]
    fn odd_cycle_uniform_seven() {
        let c7 = OddCycle::new(7).unwrap();
        let h = vec![q("3/7"); 7];
        let bar = c7.blow_up(&h);
        assert!(bar.iter().zip(&h).all(|(b, x)| b >= x));
        assert_eq!(bar.iter().cloned().sum::<Q>(), qi(3));
        support(&odd_cycle_stable_set(&c7, &h).unwrap());
    }

    #[test]
    fn odd_cycle_full_coordinate() {
        let c3 = OddCycle::new(3).unwrap();
        support(&odd_cycle_stable_set(&c3, &v(&["0", "0", "0"])).unwrap());
        support(&odd_cycle_stable_set(&c3, &v(&["0.5", "0.5", "0"])).unwrap());
    }

    #[test]
    fn bipartite_worked_example() {
        let g = Bipartite::new(3, 3, vec![(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (2, 0)]).unwrap();
        let h = v(&["0.6", "0.3", "0.2", "0.4", "0.2", "0.6"]);
        let sup = support(&bipartite_stable_set(&g, &h).unwrap());
        let sets: Vec<Vec<Q>> = sup.into_iter().map(|(p, _)| p).collect();
        assert_eq!(
            sets,
            vec![
                bits("111000"),
                bits("110000"),
                bits("100000"),
                bits("100001"),
                bits("000101"),
                bits("000111")
            ]
        );
        let zero = vec![qi(0); 6];
        assert_eq!(support(&bipartite_stable_set(&g, &zero).unwrap()), vec![(zero, qi(1))]);
    }
}
