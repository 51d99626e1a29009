//! Brute-force reference for [`infer`](super::infer).
//!
//! Enumerates every full joint assignment, forms each joint amplitude as a
//! rectangular complex number, sums the amplitudes per query outcome and
//! squares the modulus. It shares no arithmetic with the pairwise cosine
//! expansion used by the main inference path.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::inference::{InferenceResult, PhaseAssignment};
use super::network::{AmplitudeNetwork, Evidence, VarId};

/// Upper bound on `Σ log2(arity)` over the network.
pub const ORACLE_MAX_BINARY_VARIABLES: f64 = 20.0;

pub fn enumerate_joint_oracle(
    net: &AmplitudeNetwork,
    query: VarId,
    evidence: &Evidence,
    phases: &PhaseAssignment,
) -> Result<InferenceResult> {
    let size: f64 = net.variables().iter().map(|v| libm::log2(v.arity() as f64)).sum();
    if size > ORACLE_MAX_BINARY_VARIABLES + 1e-9 {
        return Err(Error::TooLarge(size));
    }
    let query_var = net.variable(query)?;
    net.check_assignment(evidence)?;
    if evidence.get(query).is_some() {
        return Err(Error::EvidenceOnQuery(query_var.name().into()));
    }
    let arities: Vec<usize> = net.variables().iter().map(|v| v.arity()).collect();
    let unobserved: Vec<usize> = (0..net.len())
        .filter(|&i| i != query.index() && evidence.get(VarId::new(i)).is_none())
        .collect();
    let configurations: usize = unobserved.iter().map(|&i| arities[i]).product();
    if phases.len() != configurations {
        return Err(Error::PhaseCount { expected: configurations, got: phases.len() });
    }

    let mut sums = vec![Complex64::new(0.0, 0.0); query_var.arity()];
    let mut classical = vec![0.0; query_var.arity()];
    let total: usize = arities.iter().product();
    let mut full = vec![0usize; net.len()];
    for mut code in 0..total {
        // decode with the last variable fastest
        for i in (0..net.len()).rev() {
            full[i] = code % arities[i];
            code /= arities[i];
        }
        if evidence.iter().any(|(v, o)| full[v.index()] != o) {
            continue;
        }
        let y = unobserved.iter().fold(0, |acc, &i| acc * arities[i] + full[i]);
        let mut amp = Complex64::from_polar(1.0, phases.phases()[y]);
        for i in 0..net.len() {
            let cpt = net.cpt(VarId::new(i))?;
            let row = cpt.parents().iter().fold(0, |acc, p| acc * arities[p.index()] + full[p.index()]);
            let entry = cpt.rows()[row][full[i]];
            amp *= Complex64::from_polar(entry.magnitude(), entry.phase());
        }
        let x = full[query.index()];
        sums[x] += amp;
        classical[x] += amp.norm_sqr();
    }

    let parts = sums
        .iter()
        .zip(&classical)
        .map(|(s, c)| (*c, s.norm_sqr() - c))
        .collect();
    InferenceResult::from_parts(query, query_var.name(), parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlbn::{infer, infer_classical, NetworkBuilder};

    #[test]
    fn matches_infer_on_shafir() {
        let mut b = NetworkBuilder::new();
        let x1 = b.add_variable("X1", ["defect", "cooperate"]).unwrap();
        let x2 = b.add_variable("X2", ["averse", "seeking"]).unwrap();
        b.set_cpt_probabilities(x1, &[], vec![vec![0.5, 0.5]]).unwrap();
        b.set_cpt_probabilities(x2, &[x1], vec![vec![0.97, 0.03], vec![0.84, 0.16]]).unwrap();
        let net = b.build().unwrap();
        let phases = PhaseAssignment::difference(2.8151).unwrap();
        let fast = infer(&net, x2, &Evidence::new(), &phases).unwrap();
        let slow = enumerate_joint_oracle(&net, x2, &Evidence::new(), &phases).unwrap();
        for x in 0..2 {
            assert!((fast.normalized[x] - slow.normalized[x]).abs() < 1e-10);
        }
        let quarter = PhaseAssignment::difference(core::f64::consts::FRAC_PI_2).unwrap();
        let slow = enumerate_joint_oracle(&net, x2, &Evidence::new(), &quarter).unwrap();
        let classical = infer_classical(&net, x2, &Evidence::new()).unwrap();
        for x in 0..2 {
            assert!((classical.normalized[x] - slow.normalized[x]).abs() < 1e-10);
        }
    }

    #[test]
    fn size_guard() {
        let mut b = NetworkBuilder::new();
        let mut ids = Vec::new();
        for i in 0..21 {
            let id = b.add_variable(alloc::format!("V{i}"), ["0", "1"]).unwrap();
            b.set_cpt_probabilities(id, &[], vec![vec![0.5, 0.5]]).unwrap();
            ids.push(id);
        }
        let net = b.build().unwrap();
        let r = enumerate_joint_oracle(&net, ids[0], &Evidence::new(), &PhaseAssignment::zeros(1 << 20));
        assert!(matches!(r, Err(Error::TooLarge(_))));
    }
}
