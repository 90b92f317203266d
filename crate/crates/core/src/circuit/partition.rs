//! Splitting a cut circuit into two subcircuits.
//!
//! Each qubit's timeline is split into segments at its wire cuts. Segments
//! joined by uncut multi-qubit gates form components, and every cut is an edge
//! between two components that must end up on opposite sides.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{Circuit, CutKind, CutMarker, CutMethod, CutSpec, Gate, GateKind, Op, PrepState, Slot, SlotRole};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// A classical bit sent from one subcircuit to the other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommMessage {
    pub from: Side,
    /// Clbit index in the sending subcircuit.
    pub clbit: usize,
    /// Clbit index in the receiving subcircuit.
    pub dest_clbit: usize,
    /// Index of the consuming op in the receiving subcircuit.
    pub consumed_by: usize,
}

/// Local qubit indices of one Bell-register pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AncillaPair {
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SiteKind {
    /// Wire cuts realized without classical communication (`lo_peng`), or
    /// a parallel batch realized by the random-basis method.
    Wire { method: CutMethod, cut_ids: Vec<String> },
    /// One entanglement-factory round feeding the listed teleport cuts.
    BellPairs { round: usize, cut_ids: Vec<String> },
    Gate { cut_id: String },
}

/// One place where a decomposition is plugged in. Its slot ops in the
/// subcircuits carry the qubits it acts on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutSite {
    pub kind: SiteKind,
    /// Side the quantum information flows from (control side for gate cuts,
    /// A for Bell-pair rounds).
    pub from: Side,
    /// Number of wires, Bell pairs or gates the site covers.
    pub width: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduledOp {
    pub side: Side,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionedCircuit {
    pub sub_a: Circuit,
    pub sub_b: Circuit,
    /// Merged execution order of both subcircuits.
    pub schedule: Vec<ScheduledOp>,
    pub comm_plan: Vec<CommMessage>,
    pub ancilla_map: Vec<AncillaPair>,
    pub sites: Vec<CutSite>,
    /// Final side and local index of each original qubit.
    pub final_location: Vec<(Side, usize)>,
    pub spec: CutSpec,
}

impl PartitionedCircuit {
    pub fn sub(&self, side: Side) -> &Circuit {
        match side {
            Side::A => &self.sub_a,
            Side::B => &self.sub_b,
        }
    }

    pub fn op(&self, s: ScheduledOp) -> &Op {
        &self.sub(s.side).ops[s.index]
    }

    pub fn n_logical(&self) -> usize {
        self.final_location.len()
    }

    pub fn ancilla_count(&self) -> usize {
        2 * self.ancilla_map.len()
    }

    /// Every op of both subcircuits is scheduled exactly once, in
    /// subcircuit order, and every message is sent before it is consumed.
    pub fn check_causality(&self) -> Result<()> {
        let mut next = [0usize; 2];
        let mut position = HashMap::new();
        for (t, s) in self.schedule.iter().enumerate() {
            let k = s.side as usize;
            if s.index != next[k] {
                return Err(Error::Partition(format!("schedule visits {:?} op {} out of order", s.side, s.index)));
            }
            next[k] += 1;
            position.insert((s.side, s.index), t);
        }
        if next != [self.sub_a.ops.len(), self.sub_b.ops.len()] {
            return Err(Error::Partition("schedule does not cover every op".into()));
        }
        for m in &self.comm_plan {
            let consumer = position[&(m.from.other(), m.consumed_by)];
            let producer = self.schedule[..consumer].iter().rev().find(|s| {
                s.side == m.from && matches!(self.op(**s), Op::Measure { clbit, .. } if *clbit == m.clbit)
            });
            if producer.is_none() {
                return Err(Error::Partition(format!(
                    "clbit {} from {:?} is consumed before it is produced",
                    m.clbit, m.from
                )));
            }
        }
        Ok(())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct Segments {
    /// Sorted wire-cut positions per qubit.
    cuts_on: Vec<Vec<usize>>,
    base: Vec<usize>,
    total: usize,
}

impl Segments {
    fn new(n_qubits: usize, wire_cuts: &[&CutMarker]) -> Self {
        let mut cuts_on = vec![Vec::new(); n_qubits];
        for m in wire_cuts {
            cuts_on[m.qubit].push(m.after_op);
        }
        let mut base = Vec::with_capacity(n_qubits);
        let mut total = 0;
        for c in cuts_on.iter_mut() {
            c.sort_unstable();
            base.push(total);
            total += c.len() + 1;
        }
        Self { cuts_on, base, total }
    }

    /// Segment of qubit `q` seen by op `i`.
    fn at(&self, q: usize, i: usize) -> usize {
        self.base[q] + self.cuts_on[q].iter().filter(|&&a| a < i).count()
    }

    fn last(&self, q: usize) -> usize {
        self.base[q] + self.cuts_on[q].len()
    }
}

/// Whether the wire cuts in `batch` lie in one time slice: every wire is
/// idle from its cut until the last cut of the batch.
fn is_parallel(circuit: &Circuit, batch: &[&CutMarker]) -> bool {
    let latest = batch.iter().map(|m| m.after_op).max().unwrap_or(0);
    batch.iter().enumerate().all(|(i, m)| {
        batch[..i].iter().all(|o| o.qubit != m.qubit)
            && circuit.next_op_on(m.qubit, m.after_op).is_some_and(|n| n > latest)
    })
}

struct Emitter {
    subs: [Circuit; 2],
    schedule: Vec<ScheduledOp>,
    comm: Vec<CommMessage>,
}

impl Emitter {
    fn emit(&mut self, side: Side, op: Op) -> usize {
        let sub = &mut self.subs[side as usize];
        sub.ops.push(op);
        let index = sub.ops.len() - 1;
        self.schedule.push(ScheduledOp { side, index });
        index
    }

    fn new_clbit(&mut self, side: Side) -> usize {
        let sub = &mut self.subs[side as usize];
        sub.n_clbits += 1;
        sub.n_clbits - 1
    }
}

/// Split `circuit` at the cuts of `spec`.
pub fn partition(circuit: &Circuit, spec: &CutSpec) -> Result<PartitionedCircuit> {
    circuit.validate()?;
    let method = spec.method;
    if method == CutMethod::LoccTeleport && spec.factory_size < 1 {
        return Err(Error::Spec("factory size must be at least 1".into()));
    }

    // resolve and order the cuts
    let mut cuts: Vec<&CutMarker> = Vec::with_capacity(spec.cut_ids.len());
    for id in &spec.cut_ids {
        let m = circuit
            .find_cut(id)
            .ok_or_else(|| Error::Spec(format!("cut {id:?} is not marked in the circuit")))?;
        if cuts.iter().any(|c| c.id == *id) {
            return Err(Error::Spec(format!("cut {id:?} listed twice")));
        }
        let expected = if method.is_wire() { CutKind::Wire } else { CutKind::Gate };
        if m.kind != expected {
            return Err(Error::Spec(format!("cut {id:?} is a {:?} cut but method {method} expects {expected:?} cuts", m.kind)));
        }
        cuts.push(m);
    }
    let mut order: Vec<usize> = (0..cuts.len()).collect();
    order.sort_by_key(|&i| (cuts[i].after_op, i));
    let rank: HashMap<&str, usize> = order.iter().enumerate().map(|(r, &i)| (cuts[i].id.as_str(), r)).collect();
    let ordered: Vec<&CutMarker> = order.iter().map(|&i| cuts[i]).collect();

    let wire_cuts: Vec<&CutMarker> = ordered.iter().copied().filter(|m| m.kind == CutKind::Wire).collect();
    for (i, m) in wire_cuts.iter().enumerate() {
        if wire_cuts[..i].iter().any(|o| o.qubit == m.qubit && o.after_op == m.after_op) {
            return Err(Error::Spec(format!("two cuts at the same position on qubit {}", m.qubit)));
        }
    }
    let gate_cut_at: HashMap<usize, &CutMarker> = ordered
        .iter()
        .filter(|m| m.kind == CutKind::Gate)
        .map(|m| (m.after_op, *m))
        .collect();
    if gate_cut_at.len() != ordered.len() - wire_cuts.len() {
        return Err(Error::Spec("two gate cuts name the same gate".into()));
    }

    // components of the qubit-time graph
    let segs = Segments::new(circuit.n_qubits, &wire_cuts);
    let mut uf = UnionFind((0..segs.total).collect());
    for (i, op) in circuit.ops.iter().enumerate() {
        if op.is_marker() || gate_cut_at.contains_key(&i) {
            continue;
        }
        let qs = op.qubits();
        for w in qs.windows(2) {
            uf.union(segs.at(w[0], i), segs.at(w[1], i));
        }
    }
    // (sender segment, receiver segment) per ordered cut
    let edges: Vec<(usize, usize)> = ordered
        .iter()
        .map(|m| match m.kind {
            CutKind::Wire => {
                let s = segs.at(m.qubit, m.after_op + 1);
                (s - 1, s)
            }
            CutKind::Gate => {
                let t = circuit.ops[m.after_op].qubits();
                (segs.at(t[0], m.after_op), segs.at(t[1], m.after_op))
            }
        })
        .collect();
    let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
    for (m, &(s, r)) in ordered.iter().zip(&edges) {
        let (cs, cr) = (uf.find(s), uf.find(r));
        if cs == cr {
            return Err(Error::Partition(format!("cut {:?} does not disconnect the circuit", m.id)));
        }
        adjacency.entry(cs).or_default().push(cr);
        adjacency.entry(cr).or_default().push(cs);
    }
    let mut color: HashMap<usize, Side> = HashMap::new();
    for &(s, _) in &edges {
        let start = uf.find(s);
        if color.contains_key(&start) {
            continue;
        }
        color.insert(start, Side::A);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            let side = color[&c];
            for &nb in &adjacency[&c] {
                match color.get(&nb) {
                    Some(&s) if s == side => {
                        return Err(Error::Partition(
                            "cuts do not split the circuit into two parts (odd cycle of cuts)".into(),
                        ))
                    }
                    Some(_) => {}
                    None => {
                        color.insert(nb, side.other());
                        queue.push_back(nb);
                    }
                }
            }
        }
    }
    let seg_side: Vec<Side> = (0..segs.total)
        .map(|s| {
            let c = uf.find(s);
            color.get(&c).copied().unwrap_or(Side::A)
        })
        .collect();
    let side_at = |q: usize, i: usize| seg_side[segs.at(q, i)];

    let sender_of = |m: &CutMarker| side_at(m.qubit, m.after_op);
    let batches = group_cuts(circuit, spec, &ordered, &rank, &sender_of)?;

    // local indices: homes first, then ancillas
    let mut home: [Vec<Option<usize>>; 2] = [vec![None; circuit.n_qubits], vec![None; circuit.n_qubits]];
    let mut n_local = [0usize; 2];
    for q in 0..circuit.n_qubits {
        for k in 0..=segs.cuts_on[q].len() {
            let side = seg_side[segs.base[q] + k] as usize;
            if home[side][q].is_none() {
                home[side][q] = Some(n_local[side]);
                n_local[side] += 1;
            }
        }
    }
    let home_of = |side: Side, q: usize| home[side as usize][q].expect("segment side has a home slot");
    let n_pairs = if method == CutMethod::LoccTeleport {
        batches.iter().map(Vec::len).max().unwrap_or(0)
    } else {
        0
    };
    let ancilla_map: Vec<AncillaPair> = (0..n_pairs)
        .map(|j| AncillaPair {
            a: n_local[0] + j,
            b: n_local[1] + j,
        })
        .collect();

    let mut em = Emitter {
        subs: [
            Circuit::new(n_local[0] + n_pairs, circuit.n_clbits),
            Circuit::new(n_local[1] + n_pairs, circuit.n_clbits),
        ],
        schedule: Vec::new(),
        comm: Vec::new(),
    };
    let mut sites: Vec<CutSite> = Vec::new();
    let mut batch_of: HashMap<&str, usize> = HashMap::new();
    for (b, batch) in batches.iter().enumerate() {
        for m in batch {
            batch_of.insert(m.id.as_str(), b);
        }
    }
    let mut fired = vec![0usize; batches.len()];
    let mut clbit_writer: Vec<Option<Side>> = vec![None; circuit.n_clbits];

    let bell_round = |em: &mut Emitter, sites: &mut Vec<CutSite>, round: usize| {
        let batch = &batches[round];
        let site = sites.len();
        sites.push(CutSite {
            kind: SiteKind::BellPairs {
                round,
                cut_ids: batch.iter().map(|m| m.id.clone()).collect(),
            },
            from: Side::A,
            width: batch.len(),
        });
        let width = batch.len();
        em.emit(
            Side::A,
            Op::Slot(Slot {
                site,
                role: SlotRole::BellPrepA,
                qubits: ancilla_map[..width].iter().map(|p| p.a).collect(),
            }),
        );
        em.emit(
            Side::B,
            Op::Slot(Slot {
                site,
                role: SlotRole::BellPrepB,
                qubits: ancilla_map[..width].iter().map(|p| p.b).collect(),
            }),
        );
    };
    if method == CutMethod::LoccTeleport && !batches.is_empty() {
        bell_round(&mut em, &mut sites, 0);
    }

    for (i, op) in circuit.ops.iter().enumerate() {
        if op.is_marker() {
            continue;
        }
        if let Some(m) = gate_cut_at.get(&i) {
            let t = op.qubits();
            let (sc, st) = (side_at(t[0], i), side_at(t[1], i));
            let site = sites.len();
            sites.push(CutSite {
                kind: SiteKind::Gate { cut_id: m.id.clone() },
                from: sc,
                width: 1,
            });
            em.emit(
                sc,
                Op::Slot(Slot {
                    site,
                    role: SlotRole::GateControl,
                    qubits: vec![home_of(sc, t[0])],
                }),
            );
            em.emit(
                st,
                Op::Slot(Slot {
                    site,
                    role: SlotRole::GateTarget,
                    qubits: vec![home_of(st, t[1])],
                }),
            );
            continue;
        }
        let qs = op.qubits();
        let side = side_at(qs[0], i);
        let local = |q: usize| home_of(side, q);
        let mapped = match op {
            Op::Gate(g) => Op::Gate(g.remapped(local)),
            Op::Measure { target, clbit } => {
                clbit_writer[*clbit] = Some(side);
                Op::Measure {
                    target: local(*target),
                    clbit: *clbit,
                }
            }
            Op::Prepare { target, state } => Op::Prepare {
                target: local(*target),
                state: *state,
            },
            Op::ClassicallyControlled { gate, clbit, value } => Op::ClassicallyControlled {
                gate: gate.remapped(local),
                clbit: *clbit,
                value: *value,
            },
            Op::Slot(_) => return Err(Error::Partition(format!("op {i}: circuit already contains slot ops"))),
            Op::Cut(_) => unreachable!("markers skipped above"),
        };
        let index = em.emit(side, mapped);
        if let Op::ClassicallyControlled { clbit, .. } = op {
            if let Some(writer) = clbit_writer[*clbit] {
                if writer != side {
                    em.comm.push(CommMessage {
                        from: writer,
                        clbit: *clbit,
                        dest_clbit: *clbit,
                        consumed_by: index,
                    });
                }
            }
        }

        for m in ordered.iter().filter(|m| m.kind == CutKind::Wire && m.after_op == i) {
            let q = m.qubit;
            let sender = side_at(q, i);
            let receiver = sender.other();
            let b = batch_of[m.id.as_str()];
            fired[b] += 1;
            match method {
                CutMethod::LoPeng | CutMethod::LoccLoweParallel => {
                    if fired[b] < batches[b].len() {
                        continue;
                    }
                    let batch = &batches[b];
                    let site = sites.len();
                    sites.push(CutSite {
                        kind: SiteKind::Wire {
                            method,
                            cut_ids: batch.iter().map(|c| c.id.clone()).collect(),
                        },
                        from: sender,
                        width: batch.len(),
                    });
                    em.emit(
                        sender,
                        Op::Slot(Slot {
                            site,
                            role: SlotRole::Send,
                            qubits: batch.iter().map(|c| home_of(sender, c.qubit)).collect(),
                        }),
                    );
                    em.emit(
                        receiver,
                        Op::Slot(Slot {
                            site,
                            role: SlotRole::Receive,
                            qubits: batch.iter().map(|c| home_of(receiver, c.qubit)).collect(),
                        }),
                    );
                }
                CutMethod::LoccTeleport => {
                    let j = fired[b] - 1;
                    let pair = ancilla_map[j];
                    let (anc_s, anc_r) = match sender {
                        Side::A => (pair.a, pair.b),
                        Side::B => (pair.b, pair.a),
                    };
                    let src = home_of(sender, q);
                    let dst = home_of(receiver, q);
                    let gate = |kind: GateKind, t: Vec<usize>| Gate::new(kind, vec![], t).expect("fixed gate");
                    let ca = em.new_clbit(sender);
                    let cb = em.new_clbit(sender);
                    let ra = em.new_clbit(receiver);
                    let rb = em.new_clbit(receiver);
                    em.emit(sender, Op::Gate(gate(GateKind::CNOT, vec![src, anc_s])));
                    em.emit(sender, Op::Gate(gate(GateKind::H, vec![src])));
                    em.emit(sender, Op::Measure { target: src, clbit: ca });
                    em.emit(sender, Op::Measure { target: anc_s, clbit: cb });
                    let fix_x = em.emit(
                        receiver,
                        Op::ClassicallyControlled {
                            gate: gate(GateKind::X, vec![anc_r]),
                            clbit: rb,
                            value: 1,
                        },
                    );
                    let fix_z = em.emit(
                        receiver,
                        Op::ClassicallyControlled {
                            gate: gate(GateKind::Z, vec![anc_r]),
                            clbit: ra,
                            value: 1,
                        },
                    );
                    em.comm.push(CommMessage {
                        from: sender,
                        clbit: cb,
                        dest_clbit: rb,
                        consumed_by: fix_x,
                    });
                    em.comm.push(CommMessage {
                        from: sender,
                        clbit: ca,
                        dest_clbit: ra,
                        consumed_by: fix_z,
                    });
                    em.emit(
                        receiver,
                        Op::Prepare {
                            target: dst,
                            state: PrepState::Zero,
                        },
                    );
                    em.emit(receiver, Op::Gate(gate(GateKind::SWAP, vec![anc_r, dst])));
                    if fired[b] == batches[b].len() && b + 1 < batches.len() {
                        bell_round(&mut em, &mut sites, b + 1);
                    }
                }
                CutMethod::GateCnot => unreachable!("gate method has no wire cuts"),
            }
        }
    }

    let final_location = (0..circuit.n_qubits)
        .map(|q| {
            let side = seg_side[segs.last(q)];
            (side, home_of(side, q))
        })
        .collect();
    let [sub_a, sub_b] = em.subs;
    let out = PartitionedCircuit {
        sub_a,
        sub_b,
        schedule: em.schedule,
        comm_plan: em.comm,
        ancilla_map,
        sites,
        final_location,
        spec: spec.clone(),
    };
    debug_assert!(out.check_causality().is_ok());
    Ok(out)
}

/// Batches of cuts decomposed jointly, in firing order.
fn group_cuts<'c>(
    circuit: &Circuit,
    spec: &CutSpec,
    ordered: &[&'c CutMarker],
    rank: &HashMap<&str, usize>,
    sender_of: &dyn Fn(&CutMarker) -> Side,
) -> Result<Vec<Vec<&'c CutMarker>>> {
    let same_direction = |batch: &[&CutMarker]| batch.iter().all(|m| sender_of(m) == sender_of(batch[0]));
    let method = spec.method;
    let mut batches: Vec<Vec<&CutMarker>> = if spec.grouping.is_empty() {
        match method {
            CutMethod::LoPeng | CutMethod::GateCnot => ordered.iter().map(|m| vec![*m]).collect(),
            CutMethod::LoccTeleport => ordered.chunks(spec.factory_size).map(|c| c.to_vec()).collect(),
            CutMethod::LoccLoweParallel => {
                let mut out: Vec<Vec<&CutMarker>> = Vec::new();
                for m in ordered {
                    if let Some(last) = out.last_mut() {
                        let mut trial = last.clone();
                        trial.push(m);
                        if is_parallel(circuit, &trial) && same_direction(&trial) {
                            *last = trial;
                            continue;
                        }
                    }
                    out.push(vec![*m]);
                }
                out
            }
        }
    } else {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for group in &spec.grouping {
            if group.is_empty() {
                return Err(Error::Spec("empty cut batch in grouping".into()));
            }
            let mut batch = Vec::new();
            for id in group {
                let r = *rank
                    .get(id.as_str())
                    .ok_or_else(|| Error::Spec(format!("grouping names unknown cut {id:?}")))?;
                if !seen.insert(id.clone()) {
                    return Err(Error::Spec(format!("cut {id:?} appears in two batches")));
                }
                batch.push(ordered[r]);
            }
            batch.sort_by_key(|m| rank[m.id.as_str()]);
            out.push(batch);
        }
        if seen.len() != ordered.len() {
            return Err(Error::Spec("grouping does not cover every cut".into()));
        }
        out.sort_by_key(|b| rank[b[0].id.as_str()]);
        out
    };
    batches.retain(|b| !b.is_empty());

    for batch in &batches {
        let ids = || batch.iter().map(|m| m.id.as_str()).collect::<Vec<_>>().join(",");
        match method {
            CutMethod::LoPeng | CutMethod::GateCnot if batch.len() > 1 => {
                return Err(Error::Spec(format!("method {method} decomposes cuts one at a time; got batch [{}]", ids())));
            }
            CutMethod::LoccTeleport if batch.len() > spec.factory_size => {
                return Err(Error::Spec(format!(
                    "batch [{}] exceeds factory size {}",
                    ids(),
                    spec.factory_size
                )));
            }
            CutMethod::LoccLoweParallel => {
                if !is_parallel(circuit, batch) {
                    return Err(Error::Spec(format!("cuts [{}] are not in one time slice", ids())));
                }
                if !same_direction(batch) {
                    return Err(Error::Spec(format!("cuts [{}] do not all move qubits the same way", ids())));
                }
            }
            _ => {}
        }
    }
    if method == CutMethod::LoccTeleport {
        for w in batches.windows(2) {
            let prev_last = rank[w[0].last().expect("nonempty").id.as_str()];
            let next_first = rank[w[1][0].id.as_str()];
            if next_first < prev_last {
                return Err(Error::Spec(
                    "factory batches must follow each other in time so ancillas can be reused".into(),
                ));
            }
        }
    }
    Ok(batches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::builtin;

    fn slots(c: &Circuit) -> Vec<&Slot> {
        c.ops
            .iter()
            .filter_map(|op| match op {
                Op::Slot(s) => Some(s),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn lo_cut_needs_no_messages() {
        let c = builtin("ghz", Some(3)).unwrap();
        let p = partition(&c, &CutSpec::new(&["w1"], CutMethod::LoPeng)).unwrap();
        assert!(p.comm_plan.is_empty());
        let roles: Vec<SlotRole> = slots(&p.sub_a).iter().chain(slots(&p.sub_b).iter()).map(|s| s.role).collect();
        assert!(roles.contains(&SlotRole::Send) && roles.contains(&SlotRole::Receive));
        p.check_causality().unwrap();
    }

    #[test]
    fn teleport_cut_sends_two_bits() {
        let c = builtin("ghz", Some(3)).unwrap();
        let p = partition(&c, &CutSpec::new(&["w1"], CutMethod::LoccTeleport)).unwrap();
        assert_eq!(p.comm_plan.len(), 2);
        assert_eq!(p.ancilla_count(), 2);
        p.check_causality().unwrap();
    }

    #[test]
    fn pair_factory_on_four_qubit_circuit() {
        let c = builtin("fig1b", None).unwrap();
        let p = partition(&c, &CutSpec::new(&["w0", "w1"], CutMethod::LoccTeleport).with_factory_size(2)).unwrap();
        assert_eq!(p.ancilla_map.len(), 2);
        assert!(p.sub_a.n_qubits <= 5 && p.sub_b.n_qubits <= 5);
        assert_eq!(p.sites.len(), 1);
        assert_eq!(p.final_location.len(), 4);
    }

    #[test]
    fn cut_that_does_not_disconnect_is_rejected() {
        let c = builtin("fig1b", None).unwrap();
        let err = partition(&c, &CutSpec::new(&["w0"], CutMethod::LoPeng)).unwrap_err();
        assert!(matches!(err, Error::Partition(_)), "{err}");
    }

    #[test]
    fn random_basis_cuts_must_be_parallel() {
        let c = builtin("fig2b", None).unwrap();
        let spec = CutSpec {
            grouping: vec![vec!["w0".into(), "w1".into()], vec!["w2".into(), "w3".into()]],
            ..CutSpec::new(&["w0", "w1", "w2", "w3"], CutMethod::LoccLoweParallel)
        };
        assert!(matches!(partition(&c, &spec).unwrap_err(), Error::Spec(_)));
    }

    #[test]
    fn unknown_cut_is_a_spec_error() {
        let c = builtin("fig2a", None).unwrap();
        assert!(matches!(partition(&c, &CutSpec::new(&["nope"], CutMethod::LoPeng)).unwrap_err(), Error::Spec(_)));
        assert!(matches!(partition(&c, &CutSpec::new(&["w0"], CutMethod::GateCnot)).unwrap_err(), Error::Spec(_)));
    }
}
