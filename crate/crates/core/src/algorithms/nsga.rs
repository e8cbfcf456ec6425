//! Environmental and mating selection of the NSGA-II family.

use std::cmp::Ordering;

use super::config::{AlgorithmConfig, AlgorithmKind};
use super::scalarize::dr_unchecked;
use super::Preference;
use crate::error::{check_len, Result};
use crate::normalization::NormalizationState;
use crate::ranking::{compare, crowding_distance, nondominated_sort, r_compare, sort_by_relation};
use crate::rng::RandomEngine;
use crate::types::{distance, Individual};

fn union(parents: &[Individual], offspring: &[Individual]) -> Vec<Individual> {
    parents.iter().chain(offspring).cloned().collect()
}

fn check_dims(pop: &[Individual], m: usize) -> Result<()> {
    for ind in pop {
        check_len(m, ind.f.len())?;
    }
    Ok(())
}

/// Crowding-distance survival: whole fronts first, then the most isolated
/// members of the front that does not fit. `score` holds the crowding
/// distance within the member's front.
pub fn nsga2_environmental_selection(parents: &[Individual], offspring: &[Individual], mu: usize) -> Vec<Individual> {
    let mut all = union(parents, offspring);
    let fronts = nondominated_sort(&all).fronts;
    let mut out = Vec::with_capacity(mu);
    for (level, front) in fronts.iter().enumerate() {
        if out.len() >= mu {
            break;
        }
        let objs: Vec<&[f64]> = front.iter().map(|&i| all[i].f.as_slice()).collect();
        let cd = crowding_distance(&objs);
        for (&i, &d) in front.iter().zip(&cd) {
            all[i].rank = Some(level);
            all[i].score = Some(d);
        }
        let mut order: Vec<usize> = front.clone();
        if out.len() + front.len() > mu {
            order.sort_by(|&a, &b| all[b].score.unwrap().total_cmp(&all[a].score.unwrap()));
            order.truncate(mu - out.len());
        }
        out.extend(order.into_iter().map(|i| all[i].clone()));
    }
    out
}

/// R-NSGA-II survival.
///
/// Pareto fronts are the primary criterion. Inside the front that does not
/// fit, members are visited in random order and any member closer than
/// `epsilon_clear` (normalized space) to an already kept member is set
/// aside; kept members are taken by ascending distance to the reference
/// point, and set-aside members refill in the same order if needed. `score`
/// holds that distance.
pub fn rnsga2_environmental_selection(
    parents: &[Individual],
    offspring: &[Individual],
    state: &NormalizationState,
    pref: &Preference,
    cfg: &AlgorithmConfig,
    engine: &mut RandomEngine,
) -> Result<Vec<Individual>> {
    let mu = cfg.mu;
    let mut all = union(parents, offspring);
    let m = pref.z.len();
    check_dims(&all, m)?;
    let (lb, ub) = (state.z_lb().as_slice(), state.z_ub().as_slice());
    for ind in &mut all {
        ind.score = Some(dr_unchecked(&ind.f, &pref.z, &pref.w, lb, ub));
    }
    let fronts = nondominated_sort(&all).fronts;
    let mut out = Vec::with_capacity(mu);
    for (level, front) in fronts.iter().enumerate() {
        if out.len() >= mu {
            break;
        }
        for &i in front {
            all[i].rank = Some(level);
        }
        let need = mu - out.len();
        if front.len() <= need {
            out.extend(front.iter().map(|&i| all[i].clone()));
            continue;
        }
        let normalized: Vec<Vec<f64>> = front
            .iter()
            .map(|&i| state.normalize(&all[i].f).map(|v| v.into_inner()))
            .collect::<Result<_>>()?;
        let mut visit: Vec<usize> = (0..front.len()).collect();
        engine.shuffle(&mut visit);
        let mut kept: Vec<usize> = Vec::new();
        let mut cleared: Vec<usize> = Vec::new();
        for k in visit {
            if kept.iter().any(|&j| distance(&normalized[k], &normalized[j]) < cfg.epsilon_clear) {
                cleared.push(k);
            } else {
                kept.push(k);
            }
        }
        let by_score = |a: &usize, b: &usize| {
            let (sa, sb) = (all[front[*a]].score.unwrap(), all[front[*b]].score.unwrap());
            sa.total_cmp(&sb).then(a.cmp(b))
        };
        kept.sort_by(by_score);
        cleared.sort_by(by_score);
        out.extend(kept.into_iter().chain(cleared).take(need).map(|k| all[front[k]].clone()));
    }
    Ok(out)
}

/// r-NSGA-II survival: fronts under r-dominance (distance range taken over
/// the union), crowding distance inside the front that does not fit.
/// `score` holds the distance to the reference point.
pub fn r2nsga2_environmental_selection(
    parents: &[Individual],
    offspring: &[Individual],
    state: &NormalizationState,
    pref: &Preference,
    cfg: &AlgorithmConfig,
) -> Result<Vec<Individual>> {
    let mu = cfg.mu;
    let mut all = union(parents, offspring);
    check_dims(&all, pref.z.len())?;
    let (lb, ub) = (state.z_lb().as_slice(), state.z_ub().as_slice());
    let dr: Vec<f64> = all.iter().map(|ind| dr_unchecked(&ind.f, &pref.z, &pref.w, lb, ub)).collect();
    let lo = dr.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = dr.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    let fronts = sort_by_relation(all.len(), |i, j| {
        r_compare(compare(&all[i].f, &all[j].f), dr[i], dr[j], range, cfg.delta) == Some(Ordering::Less)
    })
    .fronts;
    for (ind, &d) in all.iter_mut().zip(&dr) {
        ind.score = Some(d);
    }
    let mut out = Vec::with_capacity(mu);
    for (level, front) in fronts.iter().enumerate() {
        if out.len() >= mu {
            break;
        }
        for &i in front {
            all[i].rank = Some(level);
        }
        let need = mu - out.len();
        if front.len() <= need {
            out.extend(front.iter().map(|&i| all[i].clone()));
            continue;
        }
        let objs: Vec<&[f64]> = front.iter().map(|&i| all[i].f.as_slice()).collect();
        let cd = crowding_distance(&objs);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| cd[b].total_cmp(&cd[a]));
        out.extend(order.into_iter().take(need).map(|k| all[front[k]].clone()));
    }
    Ok(out)
}

/// Binary tournament on (rank, score); ties are settled by a coin flip.
pub(crate) fn tournament(pop: &[Individual], kind: AlgorithmKind, engine: &mut RandomEngine) -> usize {
    let a = engine.index(pop.len());
    let b = engine.index(pop.len());
    let (ra, rb) = (pop[a].rank.unwrap_or(usize::MAX), pop[b].rank.unwrap_or(usize::MAX));
    let ord = ra.cmp(&rb).then_with(|| {
        let (sa, sb) = (pop[a].score.unwrap_or(f64::NAN), pop[b].score.unwrap_or(f64::NAN));
        match kind {
            // larger crowding distance wins
            AlgorithmKind::Nsga2 => sb.partial_cmp(&sa).unwrap_or(Ordering::Equal),
            _ => sa.partial_cmp(&sb).unwrap_or(Ordering::Equal),
        }
    });
    match ord {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => {
            if engine.bernoulli(0.5) {
                a
            } else {
                b
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalization::NormalizationKind;
    use crate::types::ObjectiveVector;

    fn ind(f: &[f64]) -> Individual {
        Individual::new(vec![0.0].into(), ObjectiveVector::new(f.to_vec()))
    }

    fn objs(pop: &[Individual]) -> Vec<Vec<f64>> {
        pop.iter().map(|i| i.f.to_vec()).collect()
    }

    fn pref2() -> Preference {
        Preference {
            z: ObjectiveVector::new(vec![0.5, 0.5]),
            w: vec![0.5, 0.5],
        }
    }

    fn no_state(m: usize) -> NormalizationState {
        NormalizationState::new(NormalizationKind::No, m)
    }

    #[test]
    fn dominated_offspring_leave_parents_in_place() {
        let parents: Vec<Individual> = (0..6).map(|i| ind(&[i as f64, 5.0 - i as f64])).collect();
        let offspring: Vec<Individual> = (0..6).map(|i| ind(&[i as f64 + 0.5, 6.0 - i as f64])).collect();
        let cfg = AlgorithmConfig { mu: 6, ..Default::default() };
        let mut e = RandomEngine::new(0);
        let r = rnsga2_environmental_selection(&parents, &offspring, &no_state(2), &pref2(), &cfg, &mut e).unwrap();
        let mut got = objs(&r);
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, objs(&parents));
        let n = nsga2_environmental_selection(&parents, &offspring, 6);
        assert_eq!(objs(&n), objs(&parents));
        let r2 = r2nsga2_environmental_selection(&parents, &offspring, &no_state(2), &pref2(), &cfg).unwrap();
        assert_eq!(r2.len(), 6);
    }

    #[test]
    fn six_individual_trace() {
        // fronts: {A, B, D, E}, {C}, {F}; mu = 3 cuts the first front
        let a = ind(&[0.0, 1.0]);
        let b = ind(&[1.0, 0.05]);
        let c = ind(&[0.6, 0.6]);
        let d = ind(&[0.45, 0.55]);
        let e_ = ind(&[0.2, 0.9]);
        let f = ind(&[0.7, 0.7]);
        let parents = vec![a, b, c];
        let offspring = vec![d.clone(), e_.clone(), f];
        let cfg = AlgorithmConfig { mu: 3, ..Default::default() };
        let out = rnsga2_environmental_selection(&parents, &offspring, &no_state(2), &pref2(), &cfg, &mut RandomEngine::new(5)).unwrap();
        // d^R: D 0.05, E 0.3536, B 0.4757, A 0.5
        assert_eq!(objs(&out), vec![d.f.to_vec(), e_.f.to_vec(), vec![1.0, 0.05]]);
        let scores: Vec<f64> = out.iter().map(|i| i.score.unwrap()).collect();
        assert!((scores[0] - 0.05).abs() < 1e-12);
        assert!((scores[1] - 0.125f64.sqrt()).abs() < 1e-12);
        assert!((scores[2] - 0.22625f64.sqrt()).abs() < 1e-12);
        assert!(out.iter().all(|i| i.rank == Some(0)));
    }

    #[test]
    fn identical_members_are_cleared_before_refill() {
        let x = ind(&[0.5, 0.5]);
        let parents = vec![x.clone(), x.clone(), ind(&[0.0, 1.0]), ind(&[1.0, 0.0])];
        let cfg = AlgorithmConfig { mu: 3, ..Default::default() };
        for seed in 0..20 {
            let out = rnsga2_environmental_selection(&parents, &[], &no_state(2), &pref2(), &cfg, &mut RandomEngine::new(seed)).unwrap();
            let copies = out.iter().filter(|i| i.f == x.f).count();
            assert_eq!(copies, 1);
        }
        // refill brings the duplicate back when nothing else is left
        let cfg = AlgorithmConfig { mu: 4, ..Default::default() };
        let extra = vec![ind(&[2.0, 2.0])];
        let out = rnsga2_environmental_selection(&parents, &extra, &no_state(2), &pref2(), &cfg, &mut RandomEngine::new(0)).unwrap();
        assert_eq!(out.iter().filter(|i| i.f == x.f).count(), 2);
    }

    #[test]
    fn front_zero_is_never_dropped_for_a_worse_front() {
        let mut e = RandomEngine::new(17);
        let cfg = AlgorithmConfig { mu: 20, ..Default::default() };
        for _ in 0..50 {
            let pop: Vec<Individual> = (0..40).map(|_| ind(&[e.next_f64(), e.next_f64()])).collect();
            let out = rnsga2_environmental_selection(&pop[..20], &pop[20..], &no_state(2), &pref2(), &cfg, &mut e).unwrap();
            let ranks = nondominated_sort(&objs(&pop)).ranks(40);
            let worst_kept = out.iter().map(|i| ranks[pop.iter().position(|p| p.f == i.f).unwrap()]).max().unwrap();
            for (k, p) in pop.iter().enumerate() {
                if ranks[k] < worst_kept {
                    assert!(out.iter().any(|o| o.f == p.f));
                }
            }
        }
    }

    #[test]
    fn crowding_prefers_boundary_members() {
        let pop: Vec<Individual> = [[0.0, 1.0], [0.1, 0.9], [0.5, 0.5], [0.9, 0.1], [1.0, 0.0]]
            .iter()
            .map(|f| ind(f))
            .collect();
        let out = nsga2_environmental_selection(&pop, &[], 3);
        let mut got = objs(&out);
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, vec![vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0]]);
    }

    #[test]
    fn r_dominance_with_zero_delta_prefers_the_closest() {
        // all mutually non-dominated; delta = 0 ranks purely by distance
        let pop: Vec<Individual> = [[0.0, 1.0], [0.45, 0.55], [0.3, 0.7], [1.0, 0.0]].iter().map(|f| ind(f)).collect();
        let cfg = AlgorithmConfig { mu: 2, delta: 0.0, ..Default::default() };
        let out = r2nsga2_environmental_selection(&pop, &[], &no_state(2), &pref2(), &cfg).unwrap();
        assert_eq!(objs(&out), vec![vec![0.45, 0.55], vec![0.3, 0.7]]);
    }

    #[test]
    fn tournament_prefers_lower_rank_then_score() {
        let mut pop = vec![ind(&[0.0, 0.0]), ind(&[1.0, 1.0]), ind(&[2.0, 2.0])];
        for (i, (r, sc)) in [(0, 0.9), (1, 0.1), (1, 0.2)].into_iter().enumerate() {
            pop[i].rank = Some(r);
            pop[i].score = Some(sc);
        }
        let mut e = RandomEngine::new(1);
        for _ in 0..200 {
            let mut probe = e.clone();
            let (a, b) = (probe.index(3), probe.index(3));
            let w = tournament(&pop, AlgorithmKind::Rnsga2, &mut e);
            if a == 0 || b == 0 {
                assert_eq!(w, 0);
            } else if a != b {
                assert_eq!(w, 1);
            }
        }
        let mut e = RandomEngine::new(2);
        for _ in 0..200 {
            let mut probe = e.clone();
            let (a, b) = (probe.index(3), probe.index(3));
            let w = tournament(&pop, AlgorithmKind::Nsga2, &mut e);
            if a != 0 && b != 0 && a != b {
                assert_eq!(w, 2);
            }
        }
    }
}
