mod common;

use common::subset_dp_matching_number;
use edcs_core::edcs::EdcsParams;
use edcs_core::instances::{adversarial_h, gen_random, gen_three_layer, RandomFamily};
use edcs_core::matchers::maximum_matching;
use edcs_core::protocol::{
    communication_cost, partition_edges, run_k_party, run_two_party, FallbackRule, ProtocolConfig, ProtocolRunner,
    Transcript, BYTES_PER_EDGE,
};
use edcs_core::{EdgeSubset, Graph, Matching};

fn params() -> EdcsParams {
    EdcsParams::practical(0.1, 0.25, 6).unwrap()
}

fn cfg(k: usize, seed: u64) -> ProtocolConfig {
    let mut c = ProtocolConfig::new(k, params(), seed);
    c.fallback = FallbackRule::Never;
    c
}

fn check_soundness(g: &Graph, t: &Transcript) {
    let acc = t.accessible(g);
    assert!(t.output.is_within(&acc));
    assert!(Matching::new(g, t.output.edges().iter().copied()).is_ok());
    assert!((0.0..=1.0).contains(&t.ratio));
    assert_eq!(t.output_size, t.output.len());
}

#[test]
fn bob_output_is_maximum_on_his_edges() {
    for seed in 0..150u64 {
        let g = gen_random(RandomFamily::Gnp, 12, 0.35, seed).unwrap();
        let t = run_two_party(&g, &cfg(2, seed)).unwrap();
        check_soundness(&g, &t);
        let (sub, _) = g.spanning_subgraph(&t.accessible(&g));
        assert_eq!(t.output_size, subset_dp_matching_number(&sub), "seed {seed}");
    }
}

#[test]
fn k_party_soundness_and_message_recount() {
    for k in 2..=5 {
        for seed in 0..20u64 {
            let g = gen_random(RandomFamily::PlantedMatching, 120, 0.06, seed).unwrap();
            let t = run_k_party(&g, &cfg(k, seed)).unwrap();
            check_soundness(&g, &t);
            assert_eq!(t.message_sizes.len(), k - 1);
            assert_eq!(t.contributions.len(), k);
            assert!(t.contributions[k - 1].is_empty());
            // recount each hop from the edge sets
            let mut seen = EdgeSubset::from_ids(&g, t.h.iter().copied()).unwrap();
            for (i, hop) in t.message_sizes.iter().enumerate() {
                for &e in &t.contributions[i] {
                    assert!(seen.insert(e), "edge forwarded twice");
                    assert_eq!(t.partition[e.index()] as usize, i);
                }
                assert_eq!(hop.edges as usize, seen.len());
                assert_eq!(hop.bytes, hop.edges * BYTES_PER_EDGE);
            }
        }
    }
}

#[test]
fn two_party_is_the_k_party_specialisation() {
    let g = gen_random(RandomFamily::Gnp, 80, 0.1, 4).unwrap();
    for seed in 0..5 {
        assert_eq!(run_two_party(&g, &cfg(2, seed)).unwrap(), run_k_party(&g, &cfg(2, seed)).unwrap());
    }
}

#[test]
fn transcripts_are_byte_identical() {
    let g = gen_random(RandomFamily::Gnp, 100, 0.08, 1).unwrap();
    let a = serde_json::to_string(&run_k_party(&g, &cfg(3, 77)).unwrap()).unwrap();
    let b = serde_json::to_string(&run_k_party(&g, &cfg(3, 77)).unwrap()).unwrap();
    assert_eq!(a, b);
    let c = serde_json::to_string(&run_k_party(&g, &cfg(3, 78)).unwrap()).unwrap();
    assert_ne!(a, c);
    for key in ["\"seed\"", "\"k\"", "\"params\"", "\"message_sizes\"", "\"output_size\"", "\"mu\"", "\"ratio\"", "\"fallback_used\"", "\"injected_h\""] {
        assert!(a.contains(key), "{key}");
    }
}

#[test]
fn output_is_at_least_bobs_share_of_a_fixed_maximum_matching() {
    let g = gen_random(RandomFamily::Gnp, 150, 0.05, 9).unwrap();
    let star = maximum_matching(&g);
    for seed in 0..30 {
        let t = run_two_party(&g, &cfg(2, seed)).unwrap();
        let bob = star.edges().iter().filter(|e| t.partition[e.index()] == 1).count();
        assert!(t.output_size >= bob);
    }
}

#[test]
fn sample_is_an_epsilon_sample_of_all_edges() {
    // two parties: each edge lands in E_s with probability ½ · ε/(1 - ½) = ε
    let g = gen_random(RandomFamily::Gnp, 600, 0.2, 3).unwrap();
    let m = g.num_edges() as f64;
    let runner = ProtocolRunner::new(&g);
    let mut total = 0.0;
    let runs = 20;
    for seed in 0..runs {
        total += runner.run(&cfg(2, seed)).unwrap().sample.len() as f64;
    }
    let mean_rate = total / (runs as f64 * m);
    // sd of the pooled rate = sqrt(ε(1-ε) / (runs·m)) ≈ 0.0004
    assert!((mean_rate - 0.1).abs() < 0.003, "{mean_rate}");
}

#[test]
fn partition_fractions_within_five_sigma() {
    let g = gen_random(RandomFamily::Gnp, 500, 0.4, 8).unwrap();
    let m = g.num_edges() as f64;
    for k in [2usize, 3, 5] {
        let sizes = partition_edges(&g, k, 12).party_sizes();
        let p = 1.0 / k as f64;
        let sd = (p * (1.0 - p) / m).sqrt();
        for s in sizes {
            assert!((s as f64 / m - p).abs() <= 5.0 * sd);
        }
    }
}

#[test]
fn injected_h_is_flagged_and_forwarded() {
    let inst = gen_three_layer(24).unwrap();
    let h = adversarial_h(&inst.graph, &inst.spec, 4, Some(2)).unwrap();
    let mut c = ProtocolConfig::new(2, EdcsParams::practical(0.05, 0.1, 4).unwrap(), 1);
    c.fallback = FallbackRule::Never;
    c.injected_h = Some(h.ids());
    let t = run_two_party(&inst.graph, &c).unwrap();
    assert!(t.injected_h);
    assert_eq!(t.build_steps, None);
    assert_eq!(t.h, h.ids());
    assert_eq!(communication_cost(&t).max_words as usize, h.len() + t.contributions[0].len());
}

#[test]
fn fallback_regression() {
    let g = gen_random(RandomFamily::Gnp, 64, 0.1, 2).unwrap();
    let mut c = cfg(2, 5);
    c.fallback = FallbackRule::default();
    let t = run_two_party(&g, &c).unwrap();
    // 64 vertices: threshold 4·64·6 = 1536 exceeds every edge count here
    assert!(t.fallback_used);
    assert_eq!(t.ratio, 1.0);
    let alice = t.partition.iter().filter(|&&p| p == 0).count() as u64;
    assert_eq!(communication_cost(&t).max_words, alice);
}
