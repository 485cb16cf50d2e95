use proptest::prelude::*;
use vsa_core::imc::workload::{ClassificationParams, FactorizationParams, NavigationParams, PerceptionParams};
use vsa_core::imc::*;
use vsa_core::reasoning::resonator::Schedule;
use vsa_core::Error;

fn arch(cfg: &str) -> Architecture {
    Architecture::template(MemoryConfig::parse(cfg).unwrap())
}

fn small_fact(schedule: Schedule) -> Workload {
    Workload::Factorization(FactorizationParams {
        dim: 512,
        queries: 10,
        schedule,
        ..Default::default()
    })
}

fn nav(demos: usize) -> NavigationParams {
    NavigationParams {
        dim: 512,
        demos,
        ..Default::default()
    }
}

fn cost(w: &Workload, a: &Architecture, seed: u64) -> CostReport {
    let run = run_workload(w, seed).unwrap();
    estimate(&run, a, &TechTable::builtin()).unwrap()
}

fn roles(m: &Mapping, role: Role) -> Vec<CoreKind> {
    m.cores.iter().filter(|c| c.role == role).map(|c| c.kind).collect()
}

#[test]
fn parallel_factorization_scales_static_codebooks() {
    let m = map_workload(&small_fact(Schedule::Parallel), &arch("MRAM/SRAM")).unwrap();
    assert_eq!(roles(&m, Role::Similarity), vec![CoreKind::Static; 3]);
    assert_eq!(roles(&m, Role::Projection), vec![CoreKind::Static; 3]);
    assert_eq!(roles(&m, Role::Disentangle), vec![CoreKind::Dynamic; 3]);
    let run = run_workload(&small_fact(Schedule::Parallel), 1).unwrap();
    assert_eq!(trace_workload(&run, &m).unwrap().reprogram_events, 0);
}

#[test]
fn sequential_factorization_rewrites_codebooks() {
    let w = small_fact(Schedule::Sequential);
    let m = map_workload(&w, &arch("MRAM/SRAM")).unwrap();
    assert_eq!(roles(&m, Role::Similarity), vec![CoreKind::Dynamic]);
    assert_eq!(roles(&m, Role::Projection), vec![CoreKind::Dynamic]);
    let run = run_workload(&w, 1).unwrap();
    let t = trace_workload(&run, &m).unwrap();
    assert!(t.reprogram_events > 0);
    let sim = m.core(Role::Similarity, 0).unwrap();
    let reprogram = t.stages.iter().find(|s| s.name == "reprogram").unwrap();
    let a = reprogram.cores.iter().find(|a| a.core == sim).unwrap();
    assert_eq!(a.write_bits, 8 * 512);
}

#[test]
fn navigation_recall_is_all_static() {
    let m = map_workload(&Workload::NavigationRecall(nav(5)), &arch("RRAM/SRAM")).unwrap();
    assert_eq!(m.count(CoreKind::Dynamic), 0);
    for r in [Role::Program, Role::Cleanup] {
        assert_eq!(roles(&m, r), vec![CoreKind::Static]);
    }
}

#[test]
fn navigation_training_counts() {
    let w = Workload::NavigationTrain(nav(1));
    let m = map_workload(&w, &arch("SRAM")).unwrap();
    assert_eq!(roles(&m, Role::Sap), vec![CoreKind::Dynamic]);
    let t = trace_workload(&run_workload(&w, 3).unwrap(), &m).unwrap();
    let sensor = m.core(Role::Sensor, 0).unwrap();
    let enc = t.stages.iter().find(|s| s.name == "sensor-encode").unwrap();
    assert_eq!(enc.repeat, 1);
    let a = enc.cores.iter().find(|a| a.core == sensor).unwrap();
    assert_eq!(a.read_bits, 6 * 512);
    let program = m.core(Role::Program, 0).unwrap();
    assert_eq!(t.programming_bits[program], 512);
    assert_eq!(t.core_counters()[program].write_bits, 0);
}

fn encoding_ops(w: &Workload, a: &Architecture) -> u64 {
    let m = map_workload(w, a).unwrap();
    let t = trace_workload(&run_workload(w, 5).unwrap(), &m).unwrap();
    t.core_counters()[m.core(Role::Encoding, 0).unwrap()].ops
}

#[test]
fn sparsity_scheduler_halves_encoding_macs() {
    for w in [
        Workload::Classification(ClassificationParams {
            dim: 512,
            ..Default::default()
        }),
        Workload::Perception(PerceptionParams {
            dim: 512,
            samples: 8,
            ..Default::default()
        }),
    ] {
        let off = arch("SRAM");
        let mut on = off.clone();
        on.peripheries.sparsity_scheduler = true;
        on.peripheries.sparsity = 0.5;
        assert_eq!(2 * encoding_ops(&w, &on), encoding_ops(&w, &off));
    }
}

#[test]
fn fp_partitioner_adds_exponent_work() {
    let w = Workload::Classification(ClassificationParams {
        dim: 256,
        features: 10,
        samples: 4,
        ..Default::default()
    });
    let mut a = arch("SRAM");
    let run = run_workload(&w, 1).unwrap();
    let off = trace_workload(&run, &map_workload(&w, &a).unwrap()).unwrap().logic_totals();
    assert_eq!(off.exponent_ops, 0);
    a.peripheries.fp_partitioner = true;
    let on = trace_workload(&run, &map_workload(&w, &a).unwrap()).unwrap().logic_totals();
    let macs = 4 * 10 * 256;
    assert_eq!(on.exponent_ops, 3 * macs);
    assert_eq!(on.exponent_buffer_bits, 8 * macs);
}

#[test]
fn missing_role_is_a_mapping_error() {
    let mut a = arch("SRAM");
    a.roles = Some(vec![Role::Disentangle, Role::Similarity]);
    assert!(matches!(map_workload(&small_fact(Schedule::Parallel), &a), Err(Error::Mapping(_))));
    a.roles = Some(vec![Role::Disentangle, Role::Similarity, Role::Projection]);
    map_workload(&small_fact(Schedule::Parallel), &a).unwrap();
}

#[test]
fn missing_technology_is_incomplete_table() {
    let mut t = TechTable::builtin();
    t.entries.retain(|e| e.name != MemoryKind::Mram);
    let run = run_workload(&Workload::NavigationRecall(nav(3)), 1).unwrap();
    assert!(matches!(estimate(&run, &arch("MRAM"), &t), Err(Error::IncompleteTable(_))));
}

#[test]
fn static_nvm_writes_are_programming_only() {
    let r = cost(&Workload::NavigationRecall(nav(5)), &arch("RRAM"), 1);
    assert!(r.energy.write > 0.0);
    assert_eq!(r.energy.write, r.programming_energy);
}

#[test]
fn static_write_energy_is_independent_of_samples() {
    let few = cost(&Workload::NavigationRecall(nav(3)), &arch("RRAM"), 1);
    let many = cost(&Workload::NavigationRecall(nav(15)), &arch("RRAM"), 1);
    assert_eq!(few.energy.write, many.energy.write);
    assert!(many.energy.read > few.energy.read);
}

#[test]
fn refresh_linear_in_duration() {
    let w = Workload::NavigationRecall(nav(5));
    let run = run_workload(&w, 1).unwrap();
    let techs = TechTable::builtin();
    let edram = map_workload(&w, &arch("eDRAM")).unwrap();
    let rram = map_workload(&w, &arch("RRAM")).unwrap();
    let mut t = trace_workload(&run, &edram).unwrap();
    let mut u = trace_workload(&run, &rram).unwrap();
    let (e1, r1) = (estimate_cost(&t, &edram, &techs).unwrap(), estimate_cost(&u, &rram, &techs).unwrap());
    t.duration *= 2.0;
    u.duration *= 2.0;
    let (e2, r2) = (estimate_cost(&t, &edram, &techs).unwrap(), estimate_cost(&u, &rram, &techs).unwrap());
    assert!(e1.energy.refresh > 0.0);
    assert!((e2.energy.refresh / e1.energy.refresh - 2.0).abs() < 1e-12);
    assert_eq!(r1.energy.read, r2.energy.read);
}

#[test]
fn report_identities() {
    for w in benchmark_workloads(256).iter().chain([&small_fact(Schedule::Sequential)]) {
        for c in benchmark_configs() {
            let r = cost(w, &Architecture::template(c), 2);
            let e = &r.energy;
            assert_eq!(e.total, e.read + e.write + e.compute + e.standby + e.refresh);
            assert_eq!(r.edp, e.total * r.latency);
            let per_core: u64 = r.footprint.iter().map(|f| f.bytes).sum();
            assert_eq!(r.footprint_total, per_core + r.buffer_bytes);
        }
    }
}

#[test]
fn deterministic_reports() {
    let w = &benchmark_workloads(256)[0];
    let a = serde_json::to_vec(&cost(w, &arch("MRAM/SRAM"), 9)).unwrap();
    let b = serde_json::to_vec(&cost(w, &arch("MRAM/SRAM"), 9)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn capacity_shortfall_reloads_static_cores() {
    let w = Workload::Perception(PerceptionParams {
        dim: 256,
        samples: 6,
        ..Default::default()
    });
    let base = map_workload(&w, &arch("SRAM")).unwrap();
    let need = base.capacity_bits();
    let mut short = arch("SRAM");
    short.capacity_bits = Some(need - 256);
    let m = map_workload(&w, &short).unwrap();
    assert!(!m.reloaded_cores.is_empty());
    let run = run_workload(&w, 1).unwrap();
    let t = trace_workload(&run, &m).unwrap();
    assert_eq!(t.reprogram_events, 6 * m.reloaded_cores.len() as u64);
    let full = estimate_cost(&trace_workload(&run, &base).unwrap(), &base, &TechTable::builtin()).unwrap();
    let cut = estimate_cost(&t, &m, &TechTable::builtin()).unwrap();
    assert!(cut.energy.write > full.energy.write);
    short.capacity_bits = Some(100);
    assert!(matches!(map_workload(&w, &short), Err(Error::Mapping(_))));
}

#[test]
fn surplus_capacity_costs_area_and_standby_only() {
    let w = small_fact(Schedule::Parallel);
    let run = run_workload(&w, 1).unwrap();
    let exact = estimate(&run, &arch("SRAM"), &TechTable::builtin()).unwrap();
    let mut big = arch("SRAM");
    big.capacity_bits = Some(10 * map_workload(&w, &big).unwrap().capacity_bits());
    let r = estimate(&run, &big, &TechTable::builtin()).unwrap();
    assert!(r.area > exact.area);
    assert!(r.energy.standby > exact.energy.standby);
    assert_eq!(
        (r.energy.read, r.energy.write, r.energy.compute, r.latency),
        (exact.energy.read, exact.energy.write, exact.energy.compute, exact.latency)
    );
}

#[test]
fn dimension_divider_folds_accesses() {
    let w = Workload::NavigationRecall(nav(4));
    let run = run_workload(&w, 1).unwrap();
    let one = estimate(&run, &arch("SRAM"), &TechTable::builtin()).unwrap();
    let mut a = arch("SRAM");
    a.peripheries.dimension_divider = 4;
    let m = map_workload(&w, &a).unwrap();
    assert!(m.cores.iter().all(|c| c.cols == 128));
    let four = estimate(&run, &a, &TechTable::builtin()).unwrap();
    assert!(four.latency > one.latency);
    assert_eq!(four.energy.read, one.energy.read);
}

#[test]
fn scaling_to_source_node_is_identity() {
    let t = TechTable::builtin();
    for k in MemoryKind::ALL {
        let e = t.get(k).unwrap();
        assert_eq!(&scale_node(e, TechNode::N65, &t.scaling).unwrap(), e);
    }
    assert_eq!(t.at_node(TechNode::N65).unwrap(), t);
}

#[test]
fn mapped_pipelines_fall_within_bounds() {
    for w in benchmark_workloads(1024) {
        let m = map_workload(&w, &arch("SRAM")).unwrap();
        let bytes: u64 = m.footprint_bytes(&TechTable::builtin()).unwrap().iter().sum::<u64>() + m.buffer_bits / 8;
        let (lo, hi) = footprint_bounds(&workload_descriptor(&w)).unwrap();
        assert!(lo <= bytes && bytes <= hi, "{}: {lo} <= {bytes} <= {hi}", w.name());
    }
}

#[test]
fn sweep_shape_and_baseline() {
    let r = memory_sweep(&benchmark_workloads(256), &benchmark_configs(), &TechTable::builtin(), 1, 2).unwrap();
    assert_eq!(r.rows.len(), 18);
    assert_eq!(r.baseline, "RRAM");
    for row in r.rows.iter().filter(|r| r.config == "RRAM") {
        assert_eq!((row.norm_energy, row.norm_latency, row.norm_area), (1.0, 1.0, 1.0));
    }
    let csv = String::from_utf8(r.to_csv().unwrap()).unwrap();
    assert_eq!(csv.lines().count(), 19);
    let again = memory_sweep(&benchmark_workloads(256), &benchmark_configs(), &TechTable::builtin(), 1, 1).unwrap();
    assert_eq!(r.to_json().unwrap(), again.to_json().unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn more_activity_never_costs_less(
        stage in 0usize..4,
        extra_reads in 0u64..1000,
        extra_writes in 0u64..1000,
        extra_adds in 0u64..1000,
        repeat in 0u64..5,
    ) {
        let w = Workload::NavigationTrain(nav(4));
        let a = arch("MRAM/SRAM");
        let m = map_workload(&w, &a).unwrap();
        let t = trace_workload(&run_workload(&w, 1).unwrap(), &m).unwrap();
        let techs = TechTable::builtin();
        let before = estimate_cost(&t, &m, &techs).unwrap();
        let mut u = t.clone();
        let sap = m.core(Role::Sap, 0).unwrap();
        let s = &mut u.stages[stage];
        s.repeat += repeat;
        s.logic.adds += extra_adds;
        s.cores.push(vsa_core::imc::trace::CoreActivity {
            core: sap,
            read_accesses: extra_reads,
            write_accesses: extra_writes,
            read_bits: extra_reads * 512,
            write_bits: extra_writes * 512,
            ops: 0,
        });
        let after = estimate_cost(&u, &m, &techs).unwrap();
        prop_assert!(after.energy.total >= before.energy.total);
        prop_assert!(after.latency >= before.latency);
    }
}
