use crate::error::{Error, Result};
use crate::model::{validate_umps, Schedule, ScheduledJob};
use crate::rational::{self, int, Rational};
use crate::rounding::FractionalSchedule;

/// Doubles every slot: slot `s` becomes `2s` and `2s + 1`. Each job is
/// placed integrally in the pair of its last slot, at most two jobs per
/// pair, ordered by `(window end, index)`. Requires `γL ≤ 1/(10n)` and at
/// most two jobs with mass in every machine-slot.
pub fn extract_integral(fs: &FractionalSchedule) -> Result<Schedule> {
    let n = fs.umps().n();
    let bound = Rational::new(1, 10 * n.max(1) as i128);
    if fs.gamma() * int(fs.horizon() as i128) > bound {
        return Err(Error::PreconditionGamma(format!(
            "gamma * L = {} exceeds 1/(10n) = {}",
            rational::format(&(fs.gamma() * int(fs.horizon() as i128))),
            rational::format(&bound)
        )));
    }
    let w = fs.windows()?;
    let mut entries = Vec::with_capacity(n);
    for i in 0..fs.umps().m() {
        let jobs = fs.umps().jobs_on(i);
        for s in 0..fs.horizon() {
            if jobs.iter().filter(|&&l| fs.x(l, s) > int(0)).count() > 2 {
                return Err(Error::TooManyJobsPerSlot { machine: i, slot: s });
            }
            let mut ending: Vec<usize> = jobs.iter().copied().filter(|&l| w.end[l] == s).collect();
            ending.sort_unstable();
            for (k, l) in ending.into_iter().enumerate() {
                let start = int(2 * s as i128 + k as i128);
                entries.push(ScheduledJob { job: l, machine: i, start, end: start + int(1) });
            }
        }
    }
    let sched = Schedule::new(entries);
    let report = validate_umps(fs.umps(), &sched)?;
    if !report.feasible() {
        return Err(Error::PropertyViolated(format!("extracted schedule {report}")));
    }
    Ok(sched)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example_umps, example_schedule};
    use crate::model::UmpsInstance;
    use crate::rational::frac;
    use crate::rounding::standard_gamma;

    #[test]
    fn integral_input_doubles() {
        let fs = FractionalSchedule::from_schedule(&example_umps(), &example_schedule(), standard_gamma(8)).unwrap();
        let s = extract_integral(&fs).unwrap();
        assert!(s.makespan().unwrap() <= int(10));
        assert_eq!(s.entry(2).unwrap().start, int(0));
        assert_eq!(s.entry(4).unwrap().start, int(8));
    }

    #[test]
    fn two_jobs_share_a_slot() {
        let inst = UmpsInstance::unit(1, vec![0, 0], vec![]).unwrap();
        let gamma = frac(1, 40);
        let rows = vec![vec![frac(39, 40), int(0)], vec![frac(1, 40), int(1) - frac(1, 40)]];
        let fs = FractionalSchedule::new(inst, 2, gamma, rows).unwrap();
        let s = extract_integral(&fs).unwrap();
        assert_eq!(s.entry(0).unwrap().start, int(0));
        assert_eq!(s.entry(1).unwrap().start, int(2));
        assert_eq!(s.makespan().unwrap(), int(3));
    }

    #[test]
    fn three_in_a_slot_is_rejected() {
        let inst = UmpsInstance::unit(1, vec![0, 0, 0], vec![]).unwrap();
        let t = frac(1, 3);
        let rows = vec![vec![t, frac(2, 3), int(0)], vec![t, int(0), frac(2, 3)], vec![t, frac(1, 3), frac(1, 3)]];
        let fs = FractionalSchedule::new(inst, 3, frac(1, 1000), rows).unwrap();
        assert_eq!(extract_integral(&fs), Err(Error::TooManyJobsPerSlot { machine: 0, slot: 0 }));
    }

    #[test]
    fn gamma_precondition() {
        let inst = UmpsInstance::unit(1, vec![0], vec![]).unwrap();
        let fs = FractionalSchedule::new(inst, 1, frac(1, 5), vec![vec![int(1)]]).unwrap();
        assert!(matches!(extract_integral(&fs), Err(Error::PreconditionGamma(_))));
    }
}
