use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};
use crate::reductions::{validate_grouped, GroupedSchedule, RelatedReductionArtifact};
use crate::rounding::{standard_gamma, FractionalSchedule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripOutcome {
    pub schedule: FractionalSchedule,
    /// Fraction of each job group that ran off its home machine group.
    pub deleted: Vec<Rational>,
    /// Groups over the misplacement bound when `κ` is below the sound value.
    pub warnings: Vec<String>,
}

/// Reads a fractional UMPS schedule off a grouped related-machines
/// schedule: `x_{l,s}` is the fraction of `𝒥_l` run by its home machine
/// group in slot `s`; members placed elsewhere are dropped. Home placements
/// must start at integer times, which they do whenever the schedule runs
/// home members slot by slot.
pub fn strip_misplaced(art: &RelatedReductionArtifact, gs: &GroupedSchedule) -> Result<StripOutcome> {
    let report = validate_grouped(&art.output, gs)?;
    if !report.feasible() {
        return Err(Error::InfeasibleInput(report.to_string()));
    }
    let n = art.source.n();
    let gamma = standard_gamma(n);
    let horizon = rational::ceil_i128(&gs.makespan()?) as usize;
    let mut mass = vec![vec![int(0); horizon]; n];
    let mut deleted = vec![int(0); n];
    for p in &gs.placements {
        let l = art.origin[p.group];
        let size = art.output.job_groups()[p.group].multiplicity;
        let share = Rational::new(p.count as i128, size as i128);
        if p.machine_group == art.machine_group_of[art.source.home(l)] {
            if !rational::is_integer(&p.start) {
                return Err(Error::InfeasibleInput(format!(
                    "home placement of group {} starts at {}",
                    p.group + 1,
                    rational::format(&p.start)
                )));
            }
            mass[l][p.start.to_integer() as usize] += share;
        } else {
            deleted[l] += share;
        }
    }
    let mut warnings = Vec::new();
    for (l, d) in deleted.iter().enumerate() {
        if *d > gamma {
            if art.sound_kappa {
                return Err(Error::MisplacedFractionExceeded(l));
            }
            warnings.push(format!(
                "job {}: misplaced fraction {} exceeds gamma {} (kappa {} below the sound value)",
                l + 1,
                rational::format(d),
                rational::format(&gamma),
                art.kappa
            ));
        }
    }
    let schedule = FractionalSchedule::new(art.source.clone(), horizon, gamma, mass)?;
    Ok(StripOutcome { schedule, deleted, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example_umps, example_schedule};
    use crate::model::UmpsInstance;
    use crate::reductions::{forward_map_related, umps_to_related, GroupPlacement};
    use crate::rational::frac;

    fn place(group: usize, machine_group: usize, start: Rational, end: Rational, count: u128) -> GroupPlacement {
        GroupPlacement { group, machine_group, start, end, count }
    }

    #[test]
    fn forward_output_strips_to_integral() {
        let art = umps_to_related(&example_umps(), None).unwrap();
        let gs = forward_map_related(&art, &example_schedule()).unwrap();
        let out = strip_misplaced(&art, &gs).unwrap();
        assert!(out.schedule.is_integral());
        assert!(out.deleted.iter().all(|d| *d == int(0)));
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn exactly_gamma_misplaced() {
        // two independent jobs homed on machines 1 and 2; kappa = 160 is the
        // sound value, |J_1| = 25600 and floor(gamma |J_1|) = 640
        let inst = UmpsInstance::unit(2, vec![0, 1], vec![]).unwrap();
        let art = umps_to_related(&inst, None).unwrap();
        assert!(art.sound_kappa);
        let step = frac(1, 160);
        let mut placements = vec![place(0, 0, int(0), int(1), 25600 - 640)];
        for k in 0..640 {
            let s = step * int(k);
            placements.push(place(0, 1, s, s + step, 1));
        }
        placements.push(place(1, 1, int(4), int(5), 1));
        let out = strip_misplaced(&art, &GroupedSchedule { placements }).unwrap();
        assert_eq!(out.deleted[0], frac(1, 40));
        assert_eq!(out.schedule.total(0), int(1) - frac(1, 40));
        assert_eq!(out.schedule.horizon(), 5);
    }

    #[test]
    fn over_bound_at_sound_kappa() {
        let inst = UmpsInstance::unit(2, vec![0, 1], vec![]).unwrap();
        let art = umps_to_related(&inst, None).unwrap();
        let step = frac(1, 160);
        let mut placements = vec![place(0, 0, int(0), int(1), 25600 - 641)];
        for k in 0..641 {
            let s = step * int(k);
            placements.push(place(0, 1, s, s + step, 1));
        }
        placements.push(place(1, 1, int(5), int(6), 1));
        assert_eq!(
            strip_misplaced(&art, &GroupedSchedule { placements }),
            Err(Error::MisplacedFractionExceeded(0))
        );
    }

    #[test]
    fn override_kappa_reaches_property_check() {
        let inst = UmpsInstance::unit(2, vec![0, 1], vec![]).unwrap();
        let art = umps_to_related(&inst, Some(2)).unwrap();
        // a quarter of J_1 runs on the fast machine
        let placements = vec![
            place(0, 0, int(0), int(1), 3),
            place(0, 1, int(0), frac(1, 2), 1),
            place(1, 1, int(1), int(2), 1),
        ];
        assert!(matches!(
            strip_misplaced(&art, &GroupedSchedule { placements }),
            Err(Error::PropertyViolated(_))
        ));
    }
}
