//! Layered k-partite graphs → UMPS: one unit job per vertex, layer `i` on
//! machine `i`, one precedence per edge.

use crate::error::{Error, Result};
use crate::model::{KPartiteInstance, Schedule, ScheduledJob, UmpsInstance};
use crate::rational::{int, Rational};

/// Ordered cells `V_{i,0} .. V_{i,Q−1}` of every layer, as in-layer indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPartiteYesCertificate {
    pub partition: Vec<Vec<Vec<usize>>>,
}

pub fn kpartite_to_umps(g: &KPartiteInstance) -> Result<UmpsInstance> {
    let home: Vec<usize> = (0..g.k()).flat_map(|i| std::iter::repeat_n(i, g.n())).collect();
    let edges = g
        .edge_sets()
        .iter()
        .enumerate()
        .flat_map(|(i, set)| set.iter().map(move |&(a, b)| (i, a, b)))
        .map(|(i, a, b)| (g.vertex_id(i, a), g.vertex_id(i + 1, b)))
        .collect();
    UmpsInstance::unit(g.k(), home, edges)
}

/// Checks the cell count, that cells partition each layer, the size floor
/// `|V_{i,j}| ≥ (1−ε)n/Q`, and that no edge runs to an earlier cell.
pub fn validate_certificate(g: &KPartiteInstance, cert: &KPartiteYesCertificate) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidCertificate(msg));
    if cert.partition.len() != g.k() {
        return bad(format!("{} layers in certificate, expected {}", cert.partition.len(), g.k()));
    }
    let floor = (int(1) - g.eps()) * int(g.n() as i128) / int(g.q() as i128);
    let mut cell_of = vec![vec![usize::MAX; g.n()]; g.k()];
    for (i, cells) in cert.partition.iter().enumerate() {
        if cells.len() != g.q() {
            return bad(format!("layer {} has {} cells, expected {}", i + 1, cells.len(), g.q()));
        }
        for (j, cell) in cells.iter().enumerate() {
            if int(cell.len() as i128) < floor {
                return bad(format!("cell ({}, {}) has {} vertices", i + 1, j, cell.len()));
            }
            for &a in cell {
                if a >= g.n() || cell_of[i][a] != usize::MAX {
                    return bad(format!("vertex {} of layer {} misplaced or repeated", a + 1, i + 1));
                }
                cell_of[i][a] = j;
            }
        }
        if let Some(a) = cell_of[i].iter().position(|&c| c == usize::MAX) {
            return bad(format!("vertex {} of layer {} uncovered", a + 1, i + 1));
        }
    }
    for i in 0..g.k().saturating_sub(1) {
        for &(a, b) in g.edges(i) {
            if cell_of[i][a] > cell_of[i + 1][b] {
                return bad(format!("edge ({}, {}) between layers {} and {} goes backwards", a + 1, b + 1, i + 1, i + 2));
            }
        }
    }
    Ok(())
}

/// Layer start offsets `t_i = i·n(ε + 1/Q)` for 0-based `i`.
pub fn yes_offsets(g: &KPartiteInstance) -> Vec<Rational> {
    let step = int(g.n() as i128) * (g.eps() + Rational::new(1, g.q() as i128));
    (0..g.k()).map(|i| step * int(i as i128)).collect()
}

/// Machine `i` runs its cells back-to-back from `t_i`, vertices ascending
/// inside each cell.
pub fn kpartite_yes_schedule(g: &KPartiteInstance, cert: &KPartiteYesCertificate) -> Result<Schedule> {
    validate_certificate(g, cert)?;
    let offsets = yes_offsets(g);
    let mut entries = Vec::with_capacity(g.k() * g.n());
    for (i, cells) in cert.partition.iter().enumerate() {
        let mut t = offsets[i];
        for cell in cells {
            let mut sorted = cell.clone();
            sorted.sort_unstable();
            for a in sorted {
                entries.push(ScheduledJob { job: g.vertex_id(i, a), machine: i, start: t, end: t + int(1) });
                t += int(1);
            }
        }
    }
    Ok(Schedule::new(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_umps;
    use crate::rational::frac;

    #[test]
    fn small_embeddings() {
        let g = KPartiteInstance::with_standard_params(2, 2, vec![vec![(0, 0)]]).unwrap();
        let u = kpartite_to_umps(&g).unwrap();
        assert_eq!((u.n(), u.m(), u.dag().edges().len()), (4, 2, 1));
        assert!(u.is_unit() && u.is_layered());

        let full: Vec<(usize, usize)> = (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).collect();
        let g = KPartiteInstance::with_standard_params(3, 2, vec![full.clone(), full]).unwrap();
        let u = kpartite_to_umps(&g).unwrap();
        assert_eq!((u.n(), u.dag().edges().len()), (6, 8));
        assert_eq!(u.homes(), &[0, 0, 1, 1, 2, 2]);
    }

    #[test]
    fn two_layer_offsets_and_makespan() {
        // vertices {0,1} in cell 0 and {2,3} in cell 1 of both layers
        let cells = vec![vec![0, 1], vec![2, 3]];
        let g = KPartiteInstance::new(2, 4, vec![vec![(0, 0), (1, 2), (2, 3)]], 2, frac(1, 2), frac(1, 2)).unwrap();
        let cert = KPartiteYesCertificate { partition: vec![cells.clone(), cells] };
        assert_eq!(yes_offsets(&g), vec![int(0), int(4)]);
        let s = kpartite_yes_schedule(&g, &cert).unwrap();
        assert!(validate_umps(&kpartite_to_umps(&g).unwrap(), &s).unwrap().feasible());
        assert_eq!(s.makespan().unwrap(), int(8));
        assert!(s.makespan().unwrap() <= int(12));
    }

    #[test]
    fn single_layer() {
        let g = KPartiteInstance::with_standard_params(1, 3, vec![]).unwrap();
        let cert = KPartiteYesCertificate { partition: vec![vec![vec![2, 0, 1]]] };
        let s = kpartite_yes_schedule(&g, &cert).unwrap();
        assert_eq!(yes_offsets(&g), vec![int(0)]);
        assert_eq!(s.makespan().unwrap(), int(3));
    }

    #[test]
    fn edgeless_balanced() {
        let g = KPartiteInstance::with_standard_params(2, 2, vec![vec![]]).unwrap();
        let cert = KPartiteYesCertificate { partition: vec![vec![vec![0], vec![1]]; 2] };
        let s = kpartite_yes_schedule(&g, &cert).unwrap();
        let t2 = yes_offsets(&g)[1];
        assert_eq!(t2, int(2));
        assert_eq!(s.makespan().unwrap(), t2 + int(2));
    }

    #[test]
    fn backward_edge_rejected() {
        let g = KPartiteInstance::with_standard_params(2, 2, vec![vec![(1, 0)]]).unwrap();
        let cert = KPartiteYesCertificate { partition: vec![vec![vec![0], vec![1]]; 2] };
        assert!(matches!(kpartite_yes_schedule(&g, &cert), Err(Error::InvalidCertificate(_))));
    }

    #[test]
    fn malformed_partitions_rejected() {
        let g = KPartiteInstance::with_standard_params(2, 2, vec![vec![]]).unwrap();
        let cases = vec![
            vec![vec![vec![0, 1], vec![]]; 2],
            vec![vec![vec![0], vec![0]]; 2],
            vec![vec![vec![0, 1]]; 2],
            vec![vec![vec![0], vec![1]]],
        ];
        for partition in cases {
            let cert = KPartiteYesCertificate { partition };
            assert!(validate_certificate(&g, &cert).is_err());
        }
    }
}
