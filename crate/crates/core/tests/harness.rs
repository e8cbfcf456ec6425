use std::collections::BTreeMap;

use pbemo::harness::{
    execute_campaign, friedman_average_ranks, read_traces, write_results, CampaignMeta, ExperimentConfig, ProblemGroup,
};
use pbemo::problems::Suite;

const CONFIG: &str = r#"
runs = 3
budget = 1500
checkpoints = [100, 700, 1500]
pf_samples = 800
seed = 42
[[problems]]
name = "sdtlz2"
m = 3
[[problems]]
name = "sdtlz1"
m = 2
[[algorithms]]
name = "rnsga2"
mu = 50
[[algorithms]]
name = "moead-nums"
mu = 50
neighborhood_t = 10
"#;

#[test]
fn written_results_are_consistent() {
    let cfg = ExperimentConfig::from_toml_str(CONFIG).unwrap();
    let outcome = execute_campaign(&cfg, 2).unwrap();
    assert!(outcome.failures.is_empty());
    assert_eq!(outcome.traces.len(), 2 * 2 * 4 * 3);
    for t in &outcome.traces {
        assert_eq!(t.records.len(), 3);
        let evals: Vec<usize> = t.records.iter().map(|r| r.evaluations).collect();
        assert_eq!(evals, vec![100, 700, 1500]);
    }

    let tables: Vec<_> = [100, 700, 1500]
        .iter()
        .map(|&c| friedman_average_ranks(&outcome.traces, ProblemGroup { suite: Suite::Sdtlz, m: None }, c).unwrap())
        .collect();
    for t in &tables {
        assert_eq!(t.treatments.len(), 8);
        for row in &t.ranks {
            let mut sorted = row.clone();
            sorted.sort_by(f64::total_cmp);
            assert_eq!(sorted.iter().sum::<f64>(), 36.0);
        }
        assert!(t.average.iter().all(|&a| (1.0..=8.0).contains(&a)));
    }

    let dir = tempfile::tempdir().unwrap();
    let meta = CampaignMeta::from_config(&cfg, vec![]).unwrap();
    let manifest = write_results(&outcome.traces, &tables, dir.path(), &meta).unwrap();
    assert_eq!(manifest.seeds, vec![42, 43, 44]);
    let provenance: Vec<_> = manifest.meta.reference_points.iter().map(|r| r.provenance.as_str()).collect();
    assert_eq!(provenance, vec!["table", "reconstructed"]);

    let back = read_traces(dir.path()).unwrap();
    assert_eq!(back, outcome.traces);

    // summary means recomputed from the per-run files
    let mut sums: BTreeMap<(String, usize, String, usize), Vec<f64>> = BTreeMap::new();
    for t in &back {
        for r in &t.records {
            sums.entry((t.identity.problem.clone(), t.identity.m, t.identity.treatment(), r.checkpoint))
                .or_default()
                .push(r.igd_plus_c);
        }
    }
    let mut reader = csv::Reader::from_path(dir.path().join("summary.csv")).unwrap();
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let key = (rec[0].to_string(), rec[1].parse().unwrap(), rec[2].to_string(), rec[3].parse().unwrap());
        let v = &sums[&key];
        let mean: f64 = rec[5].parse().unwrap();
        assert!((mean - v.iter().sum::<f64>() / v.len() as f64).abs() < 1e-12);
        rows += 1;
    }
    assert_eq!(rows, sums.len());

    let ranks = std::fs::read_to_string(dir.path().join("ranks.csv")).unwrap();
    assert_eq!(ranks.lines().count(), 1 + 3 * 8);
}

#[test]
fn dtlz2_with_identity_normalization_converges() {
    let cfg = ExperimentConfig::from_toml_str(
        r#"
runs = 5
budget = 20000
checkpoints = [20000]
normalizations = ["no"]
[[problems]]
name = "dtlz2"
m = 2
[[algorithms]]
name = "rnsga2"
"#,
    )
    .unwrap();
    let out = execute_campaign(&cfg, 1).unwrap();
    let mean = out.traces.iter().map(|t| t.records[0].igd_plus_c).sum::<f64>() / 5.0;
    assert!(mean < 5e-3, "{mean}");
}
