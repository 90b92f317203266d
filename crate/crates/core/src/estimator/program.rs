//! Lowering of a partitioned circuit into one instruction list over physical
//! qubit and classical-bit slots shared by both sides.
//!
//! A-side local qubit `i` is physical `i`, B-side local qubit `i` is
//! physical `n_A + i`; classical bits are offset the same way. Messages of
//! the communication plan become explicit bit copies placed right before
//! the consuming op.

use std::collections::HashSet;

use crate::circuit::{Op, PartitionedCircuit, PrepState, Side, SlotRole};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

#[derive(Clone, Debug)]
pub(crate) enum Instr {
    Gate { matrix: CMatrix, qubits: Vec<usize> },
    Measure { qubit: usize, clbit: usize },
    Prepare { qubit: usize, state: PrepState },
    CGate { matrix: CMatrix, qubits: Vec<usize>, clbit: usize, value: u8 },
    Copy { from: usize, to: usize },
    /// Decomposition of site `site`. `inputs == outputs` for gate cuts;
    /// otherwise inputs are consumed and outputs freshly written.
    Site { site: usize, inputs: Vec<usize>, outputs: Vec<usize> },
    /// Trace out a qubit whose content is never used again.
    Free { qubit: usize },
    /// Forget a classical bit that is never read again.
    FreeBit { clbit: usize },
}

impl Instr {
    /// Qubits whose current content the instruction reads.
    fn reads(&self) -> Vec<usize> {
        match self {
            Instr::Gate { qubits, .. } | Instr::CGate { qubits, .. } => qubits.clone(),
            Instr::Measure { qubit, .. } => vec![*qubit],
            Instr::Site { inputs, .. } => inputs.clone(),
            _ => Vec::new(),
        }
    }

    /// Qubits whose content is overwritten without being read.
    fn fresh(&self) -> Vec<usize> {
        match self {
            Instr::Prepare { qubit, .. } => vec![*qubit],
            Instr::Site { inputs, outputs, .. } if inputs != outputs => outputs.clone(),
            _ => Vec::new(),
        }
    }

    /// Qubits removed by the instruction itself.
    fn consumes(&self) -> Vec<usize> {
        match self {
            Instr::Site { inputs, outputs, .. } if inputs != outputs => inputs.clone(),
            _ => Vec::new(),
        }
    }

    fn bit_reads(&self) -> Option<usize> {
        match self {
            Instr::CGate { clbit, .. } => Some(*clbit),
            Instr::Copy { from, .. } => Some(*from),
            _ => None,
        }
    }

    fn bit_writes(&self) -> Option<usize> {
        match self {
            Instr::Measure { clbit, .. } => Some(*clbit),
            Instr::Copy { to, .. } => Some(*to),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Program {
    pub n_clbits: usize,
    pub instrs: Vec<Instr>,
    /// Physical qubit holding each logical output qubit.
    pub final_qubits: Vec<usize>,
    pub n_measurements: usize,
}

struct Layout {
    qubit_offset_b: usize,
    clbit_offset_b: usize,
}

impl Layout {
    fn qubit(&self, side: Side, q: usize) -> usize {
        match side {
            Side::A => q,
            Side::B => self.qubit_offset_b + q,
        }
    }

    fn clbit(&self, side: Side, c: usize) -> usize {
        match side {
            Side::A => c,
            Side::B => self.clbit_offset_b + c,
        }
    }
}

pub(crate) fn compile(p: &PartitionedCircuit) -> Result<Program> {
    let layout = Layout {
        qubit_offset_b: p.sub_a.n_qubits,
        clbit_offset_b: p.sub_a.n_clbits,
    };
    let n_clbits = p.sub_a.n_clbits + p.sub_b.n_clbits;
    let mut instrs = Vec::new();
    let mut pending_inputs: Vec<Option<Vec<usize>>> = vec![None; p.sites.len()];
    let mut n_measurements = 0;

    for s in &p.schedule {
        for msg in p.comm_plan.iter().filter(|m| m.from != s.side && m.consumed_by == s.index) {
            instrs.push(Instr::Copy {
                from: layout.clbit(msg.from, msg.clbit),
                to: layout.clbit(msg.from.other(), msg.dest_clbit),
            });
        }
        let q = |local: usize| layout.qubit(s.side, local);
        match p.op(*s) {
            Op::Gate(g) => instrs.push(Instr::Gate {
                matrix: g.matrix(),
                qubits: g.targets.iter().map(|&t| q(t)).collect(),
            }),
            Op::Measure { target, clbit } => {
                n_measurements += 1;
                instrs.push(Instr::Measure {
                    qubit: q(*target),
                    clbit: layout.clbit(s.side, *clbit),
                })
            }
            Op::Prepare { target, state } => instrs.push(Instr::Prepare { qubit: q(*target), state: *state }),
            Op::ClassicallyControlled { gate, clbit, value } => instrs.push(Instr::CGate {
                matrix: gate.matrix(),
                qubits: gate.targets.iter().map(|&t| q(t)).collect(),
                clbit: layout.clbit(s.side, *clbit),
                value: *value,
            }),
            Op::Cut(_) => {}
            Op::Slot(slot) => {
                let phys: Vec<usize> = slot.qubits.iter().map(|&t| q(t)).collect();
                let site = slot.site;
                if site >= p.sites.len() {
                    return Err(Error::Partition(format!("slot refers to unknown site {site}")));
                }
                match slot.role {
                    SlotRole::Send | SlotRole::GateControl | SlotRole::BellPrepA => pending_inputs[site] = Some(phys),
                    SlotRole::Receive | SlotRole::GateTarget | SlotRole::BellPrepB => {
                        let first = pending_inputs[site]
                            .take()
                            .ok_or_else(|| Error::Partition(format!("site {site}: second slot before first")))?;
                        instrs.push(match slot.role {
                            SlotRole::Receive => Instr::Site { site, inputs: first, outputs: phys },
                            SlotRole::GateTarget => {
                                let both: Vec<usize> = first.into_iter().chain(phys).collect();
                                Instr::Site { site, inputs: both.clone(), outputs: both }
                            }
                            _ => Instr::Site {
                                site,
                                inputs: Vec::new(),
                                outputs: first.into_iter().chain(phys).collect(),
                            },
                        });
                    }
                }
            }
        }
    }
    if let Some(site) = pending_inputs.iter().position(Option::is_some) {
        return Err(Error::Partition(format!("site {site} has no matching second slot")));
    }

    let final_qubits: Vec<usize> = p.final_location.iter().map(|&(side, q)| layout.qubit(side, q)).collect();
    let instrs = insert_frees(instrs, &final_qubits, n_clbits);
    Ok(Program {
        n_clbits,
        instrs,
        final_qubits,
        n_measurements,
    })
}

/// Backward liveness pass: free every qubit and bit right after its last use.
fn insert_frees(instrs: Vec<Instr>, final_qubits: &[usize], n_clbits: usize) -> Vec<Instr> {
    let mut live: HashSet<usize> = final_qubits.iter().copied().collect();
    let mut live_bits: HashSet<usize> = HashSet::new();
    let mut out_rev: Vec<Instr> = Vec::with_capacity(instrs.len() * 2);
    for ins in instrs.into_iter().rev() {
        let consumed = ins.consumes();
        let mut after: Vec<Instr> = Vec::new();
        for q in ins.reads().into_iter().chain(ins.fresh()) {
            if !consumed.contains(&q) && !live.contains(&q) && !after.iter().any(|f| matches!(f, Instr::Free { qubit } if *qubit == q)) {
                after.push(Instr::Free { qubit: q });
            }
        }
        if let Some(c) = ins.bit_writes() {
            if c < n_clbits && !live_bits.contains(&c) {
                after.push(Instr::FreeBit { clbit: c });
            }
        }
        if let Some(c) = ins.bit_reads() {
            if !live_bits.contains(&c) && ins.bit_writes() != Some(c) {
                after.push(Instr::FreeBit { clbit: c });
            }
        }
        for q in ins.fresh().iter().chain(&consumed) {
            live.remove(q);
        }
        live.extend(ins.reads());
        if let Some(c) = ins.bit_writes() {
            live_bits.remove(&c);
        }
        if let Some(c) = ins.bit_reads() {
            live_bits.insert(c);
        }
        out_rev.extend(after.into_iter().rev());
        out_rev.push(ins);
    }
    out_rev.reverse();
    out_rev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{builtin, partition, CutMethod, CutSpec};

    #[test]
    fn teleport_program_copies_bits_and_frees_qubits() {
        let c = builtin("fig2a", None).unwrap();
        let p = partition(&c, &CutSpec::new(&["w0", "w1"], CutMethod::LoccTeleport)).unwrap();
        let prog = compile(&p).unwrap();
        let copies = prog.instrs.iter().filter(|i| matches!(i, Instr::Copy { .. })).count();
        assert_eq!(copies, p.comm_plan.len());
        let sites = prog.instrs.iter().filter(|i| matches!(i, Instr::Site { .. })).count();
        assert_eq!(sites, p.sites.len());
        assert!(prog.instrs.iter().any(|i| matches!(i, Instr::Free { .. })));
        // every copy precedes the gate that reads its destination bit
        for (k, ins) in prog.instrs.iter().enumerate() {
            if let Instr::Copy { to, .. } = ins {
                assert!(prog.instrs[k + 1..].iter().any(|j| matches!(j, Instr::CGate { clbit, .. } if clbit == to)));
            }
        }
    }

    #[test]
    fn final_qubits_are_never_freed() {
        let c = builtin("fig1b", None).unwrap();
        let p = partition(&c, &CutSpec::new(&["w0", "w1"], CutMethod::LoPeng)).unwrap();
        let prog = compile(&p).unwrap();
        for q in &prog.final_qubits {
            let last = prog
                .instrs
                .iter()
                .rev()
                .find(|j| j.reads().contains(q) || j.fresh().contains(q) || matches!(j, Instr::Free { qubit } if qubit == q));
            assert!(!matches!(last, Some(Instr::Free { .. })));
        }
    }
}
