//! Random circuits with cuts that are guaranteed to partition.
//!
//! Every qubit is assigned to a side and two-qubit gates only couple qubits
//! on the same side. A wire cut moves its qubit to the other side; a gate cut
//! marks the only CNOTs allowed to straddle the sides.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Circuit, CutMethod, CutSpec, Gate, GateKind, Op, PrepState};

#[derive(Clone, Debug)]
pub struct RandomCircuitConfig {
    pub max_qubits: usize,
    pub max_depth: usize,
    pub max_cuts: usize,
    pub method: CutMethod,
    /// Allow mid-circuit measurement, reset and classically controlled gates.
    pub classical_control: bool,
}

impl Default for RandomCircuitConfig {
    fn default() -> Self {
        Self {
            max_qubits: 6,
            max_depth: 12,
            max_cuts: 2,
            method: CutMethod::LoPeng,
            classical_control: true,
        }
    }
}

struct Builder<'a, R: Rng> {
    rng: &'a mut R,
    c: Circuit,
    side: Vec<bool>,
    last_op: Vec<usize>,
    clbits_written: usize,
    classical: bool,
}

impl<R: Rng> Builder<'_, R> {
    fn emit(&mut self, op: Op) -> usize {
        let qs = op.qubits();
        let i = self.c.push(op);
        for q in qs {
            self.last_op[q] = i;
        }
        i
    }

    fn one_qubit(&mut self, q: usize) -> usize {
        let kinds = [
            GateKind::H,
            GateKind::X,
            GateKind::S,
            GateKind::T,
            GateKind::RX,
            GateKind::RY,
            GateKind::RZ,
        ];
        let kind = *kinds.choose(self.rng).unwrap();
        let params: Vec<f64> = (0..kind.n_params()).map(|_| self.rng.gen_range(-PI..PI)).collect();
        self.emit(Op::Gate(Gate::new(kind, params, vec![q]).unwrap()))
    }

    fn partner(&mut self, q: usize) -> Option<usize> {
        let mates: Vec<usize> = (0..self.c.n_qubits)
            .filter(|&p| p != q && self.side[p] == self.side[q])
            .collect();
        mates.choose(self.rng).copied()
    }

    fn two_qubit(&mut self, a: usize, b: usize) -> usize {
        let kind = *[GateKind::CNOT, GateKind::CNOT, GateKind::CZ, GateKind::SWAP]
            .choose(self.rng)
            .unwrap();
        let targets = if self.rng.gen_bool(0.5) { vec![a, b] } else { vec![b, a] };
        self.emit(Op::Gate(Gate::new(kind, vec![], targets).unwrap()))
    }

    /// A random op that acts on `q`.
    fn op_on(&mut self, q: usize) -> usize {
        let roll: f64 = self.rng.gen();
        if self.classical && roll < 0.12 {
            let clbit = self.clbits_written;
            self.clbits_written += 1;
            self.c.n_clbits = self.clbits_written;
            return self.emit(Op::Measure { target: q, clbit });
        }
        if self.classical && roll < 0.24 && self.clbits_written > 0 {
            let clbit = self.rng.gen_range(0..self.clbits_written);
            let kind = *[GateKind::X, GateKind::Z, GateKind::H].choose(self.rng).unwrap();
            let value = self.rng.gen_range(0..=1);
            let gate = Gate::new(kind, vec![], vec![q]).unwrap();
            return self.emit(Op::ClassicallyControlled { gate, clbit, value });
        }
        if self.classical && roll < 0.28 {
            let state = *PrepState::ALL.choose(self.rng).unwrap();
            return self.emit(Op::Prepare { target: q, state });
        }
        if roll < 0.6 {
            if let Some(p) = self.partner(q) {
                return self.two_qubit(q, p);
            }
        }
        self.one_qubit(q)
    }

    fn cross_cnot(&mut self) -> usize {
        let a: Vec<usize> = (0..self.c.n_qubits).filter(|&q| !self.side[q]).collect();
        let b: Vec<usize> = (0..self.c.n_qubits).filter(|&q| self.side[q]).collect();
        let (x, y) = (*a.choose(self.rng).unwrap(), *b.choose(self.rng).unwrap());
        let targets = if self.rng.gen_bool(0.5) { vec![x, y] } else { vec![y, x] };
        self.emit(Op::Gate(Gate::new(GateKind::CNOT, vec![], targets).unwrap()))
    }
}

/// Random circuit with 1 to `max_cuts` cuts suited to `config.method`,
/// together with a spec naming every cut.
pub fn random_cut_circuit<R: Rng>(rng: &mut R, config: &RandomCircuitConfig) -> (Circuit, CutSpec) {
    let n = rng.gen_range(3..=config.max_qubits.max(3));
    let mut side = vec![false; n];
    side[1] = true;
    for s in side.iter_mut().skip(2) {
        *s = rng.gen_bool(0.5);
    }
    let n_cuts = rng.gen_range(1..=config.max_cuts.max(1));
    let steps = rng.gen_range(4..=config.max_depth.max(5) - 1);
    let mut b = Builder {
        rng,
        c: Circuit::new(n, 0),
        side,
        last_op: vec![0; n],
        clbits_written: 0,
        classical: config.classical_control,
    };
    for q in 0..n {
        let theta = b.rng.gen_range(-PI..PI);
        b.emit(Op::Gate(Gate::new(GateKind::RY, vec![theta], vec![q]).unwrap()));
    }

    // step index -> qubits cut right before that step
    let mut schedule: Vec<Vec<usize>> = vec![Vec::new(); steps];
    match config.method {
        CutMethod::LoccLoweParallel => {
            // one parallel batch leaving the larger side
            let from = b.side.iter().filter(|&&s| s).count() * 2 > n;
            let mut pool: Vec<usize> = (0..n).filter(|&q| b.side[q] == from).collect();
            pool.shuffle(b.rng);
            pool.truncate(n_cuts);
            let at = b.rng.gen_range(0..steps);
            schedule[at] = pool;
        }
        CutMethod::LoPeng | CutMethod::LoccTeleport => {
            let mut at: Vec<usize> = (0..steps).collect();
            at.shuffle(b.rng);
            for &s in at.iter().take(n_cuts) {
                schedule[s].push(b.rng.gen_range(0..n));
            }
        }
        CutMethod::GateCnot => {}
    }
    let mut gate_steps: Vec<usize> = (0..steps).collect();
    gate_steps.shuffle(b.rng);
    gate_steps.truncate(if config.method == CutMethod::GateCnot { n_cuts } else { 0 });

    let mut ids = Vec::new();
    let mut markers = Vec::new();
    let mut pending: Vec<usize> = Vec::new();
    for (step, cut_now) in schedule.into_iter().enumerate() {
        for q in cut_now {
            let id = format!("c{}", ids.len());
            markers.push((id.clone(), q, b.last_op[q]));
            ids.push(id);
            b.side[q] = !b.side[q];
            pending.push(q);
        }
        if gate_steps.contains(&step) {
            let g = b.cross_cnot();
            let id = format!("c{}", ids.len());
            b.c.gate_cut(&id, g);
            ids.push(id);
        } else if let Some(q) = pending.pop() {
            b.op_on(q);
        } else {
            let q = b.rng.gen_range(0..n);
            b.op_on(q);
        }
    }
    while let Some(q) = pending.pop() {
        b.one_qubit(q);
    }
    let mut c = b.c;
    for (id, q, after) in markers {
        c.wire_cut(&id, q, after);
    }
    let spec = CutSpec {
        cut_ids: ids,
        method: config.method,
        factory_size: if config.method == CutMethod::LoccTeleport { rng.gen_range(1..=2) } else { 1 },
        grouping: Vec::new(),
    };
    c.validate().expect("generated circuit is well formed");
    (c, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::partition;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_circuits_partition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for method in CutMethod::ALL {
            let config = RandomCircuitConfig {
                method,
                ..Default::default()
            };
            for _ in 0..200 {
                let (c, spec) = random_cut_circuit(&mut rng, &config);
                assert!(c.n_qubits <= 6);
                assert!(!spec.cut_ids.is_empty() && spec.cut_ids.len() <= 2);
                if let Err(e) = partition(&c, &spec) {
                    panic!("{method}: {e}\n{}", crate::circuit::serialize_circuit(&c));
                }
            }
        }
    }
}
