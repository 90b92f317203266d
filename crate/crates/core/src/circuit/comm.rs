use std::collections::HashMap;

use serde::Serialize;

use super::{Circuit, CutSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    AToB,
    BToA,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CommClassification {
    pub one_way: bool,
    pub direction: Option<Direction>,
}

/// Classical communication needed by a cut plan. One-way iff no qubit carries
/// two or more of the plan's cuts. Sides are oriented so the first cut sends
/// from A, hence a one-way plan always points A to B. Only the cut markers
/// are inspected, never the gates.
pub fn classify_communication(spec: &CutSpec, circuit: &Circuit) -> CommClassification {
    let mut per_qubit: HashMap<usize, usize> = HashMap::new();
    let mut n_cuts = 0;
    for id in &spec.cut_ids {
        if let Some(m) = circuit.find_cut(id) {
            *per_qubit.entry(m.qubit).or_default() += 1;
            n_cuts += 1;
        }
    }
    let one_way = per_qubit.values().all(|&c| c < 2);
    CommClassification {
        one_way,
        direction: (one_way && n_cuts > 0).then_some(Direction::AToB),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{builtin, CutMethod};

    #[test]
    fn parallel_cut_is_one_way() {
        let c = builtin("fig2a", None).unwrap();
        let spec = CutSpec::new(&["w0", "w1"], CutMethod::LoccTeleport);
        let cls = classify_communication(&spec, &c);
        assert!(cls.one_way);
        assert_eq!(cls.direction, Some(Direction::AToB));
    }

    #[test]
    fn repeated_wire_cut_is_two_way() {
        let c = builtin("fig2b", None).unwrap();
        let spec = CutSpec::new(&["w0", "w1", "w2", "w3"], CutMethod::LoccTeleport);
        let cls = classify_communication(&spec, &c);
        assert!(!cls.one_way);
        assert_eq!(cls.direction, None);
    }

    #[test]
    fn no_cuts() {
        let c = builtin("fig2a", None).unwrap();
        let cls = classify_communication(&CutSpec::new(&[], CutMethod::LoPeng), &c);
        assert!(cls.one_way);
        assert_eq!(cls.direction, None);
    }
}
