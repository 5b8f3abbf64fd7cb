//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero when any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use iotc_apps::metrics::bundle_metrics;
use iotc_apps::{generate_scaled_deployment, Bundle, BUNDLES, FIRE_DETECTION, SMART_BUILDING};
use iotc_core::codegen::{
    diff_frameworks, generate_architecture_framework, generate_vocabulary_framework, render_scaffolds,
};
use iotc_core::json::to_canonical_json;
use iotc_core::linker::link;
use iotc_core::mapper::map_services;
use iotc_core::package::HandlerKey;
use iotc_core::pipeline::compile;
use iotc_core::rng::XorShift64Star;
use iotc_core::syntax::{
    parse_architecture, parse_deployment, parse_vocabulary, print_architecture, print_deployment, print_vocabulary,
};
use iotc_core::validate::{check_all, FileNames};
use iotc_core::{derive_instances, Architecture, Deployment, MappingOutput, ServiceInstance};
use iotc_sim::{parse_scenario, HandlerRegistry, NullDriver, Scenario, Simulator, Trace, TraceKind, ANY_PLATFORM};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn run_bundle(bundle: &Bundle, scenario: &str) -> Trace {
    let c = compile(&bundle.sources(), 0).expect("bundle compiles");
    let mut sim = Simulator::load(c.packages, &bundle.registry()).expect("bundle loads");
    let scn = parse_scenario(bundle.scenario(scenario).expect("scenario exists").text).expect("scenario parses");
    sim.run_scenario(&scn, 0).expect("scenario runs")
}

// 1 ------------------------------------------------------------------

fn parse_round_trip() -> Check {
    let start = Instant::now();
    for b in BUNDLES {
        let v = parse_vocabulary(b.vocabulary.text).map_err(|e| e.to_string())?;
        let a = parse_architecture(b.architecture.text).map_err(|e| e.to_string())?;
        let d = parse_deployment(b.deployment.text).map_err(|e| e.to_string())?;
        ensure!(parse_vocabulary(&print_vocabulary(&v)).ok() == Some(v), "{}: vocabulary not a fixpoint", b.name);
        ensure!(parse_architecture(&print_architecture(&a)).ok() == Some(a), "{}: architecture not a fixpoint", b.name);
        ensure!(parse_deployment(&print_deployment(&d)).ok() == Some(d), "{}: deployment not a fixpoint", b.name);
    }
    for _ in 0..50 {
        for b in BUNDLES {
            parse_vocabulary(b.vocabulary.text).map_err(|e| e.to_string())?;
            parse_architecture(b.architecture.text).map_err(|e| e.to_string())?;
            parse_deployment(b.deployment.text).map_err(|e| e.to_string())?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 1.0, "parser suite took {secs:.3}s (limit 1s)");
    Ok(format!("2 bundles fixpoint, 300 parses in {secs:.3}s < 1s"))
}

// 2 ------------------------------------------------------------------

fn validation_mutations() -> Check {
    let vocab = parse_vocabulary(SMART_BUILDING.vocabulary.text).unwrap();
    let sal = SMART_BUILDING.architecture.text;
    let sdl = SMART_BUILDING.deployment.text;
    let dep = parse_deployment(sdl).unwrap();
    let no_profiles = print_deployment(&Deployment {
        devices: dep.devices.iter().filter(|d| !d.hosts("ProfileDB")).cloned().collect(),
        ..dep.clone()
    });
    let cases: Vec<(&str, String, String, &str)> = vec![
        ("unknown event", sal.replace("consume badgeDetected from", "consume noSuchEvent from"), sdl.into(), "E-CONSUME-UNRESOLVED"),
        ("unknown action", sal.replace("command SetTemp(setTemp)", "command SetTemperature(setTemp)"), sdl.into(), "E-COMMAND-UNRESOLVED"),
        ("bad scope label", sal.replace("command SetTemp(setTemp) to hops:0:Room", "command SetTemp(setTemp) to hops:0:Warehouse"), sdl.into(), "E-SCOPE-LABEL"),
        ("unknown resource", sal.into(), sdl.replacen("resources { BadgeReader }", "resources { FogMachine }", 1), "E-RESOURCE-UNKNOWN"),
        ("region order", sal.into(), sdl.replacen("Building:15; Floor:11; Room:1;", "Room:1; Floor:11; Building:15;", 1), "E-REGION-ORDER"),
        ("missing responder", sal.into(), no_profiles, "E-NO-RESPONDER"),
    ];
    let files = FileNames { vocabulary: "v", architecture: "a", deployment: "d" };
    for (what, a, d, want) in &cases {
        ensure!(a != sal || d != sdl, "{what}: mutation did not apply");
        let arch = parse_architecture(a).map_err(|e| format!("{what}: {e}"))?;
        let dep = parse_deployment(d).map_err(|e| format!("{what}: {e}"))?;
        let codes: Vec<&str> = check_all(&arch, &dep, &vocab, &files).iter().map(|x| x.code).collect();
        ensure!(codes == [*want], "{what}: got {codes:?}, want [{want}]");
    }
    Ok(format!("{} mutations, each exactly its code", cases.len()))
}

// 3 ------------------------------------------------------------------

/// Devices whose path extends the partition, by direct scan.
fn eligible(dep: &Deployment, inst: &ServiceInstance) -> BTreeSet<String> {
    dep.devices
        .iter()
        .filter(|d| d.region.len() >= inst.partition.len())
        .filter(|d| d.region.entries().iter().zip(inst.partition.entries()).all(|(a, b)| a == b))
        .map(|d| d.name.clone())
        .collect()
}

fn mapping_sound(arch: &Architecture, dep: &Deployment, out: &MappingOutput) -> Result<(), String> {
    let instances = derive_instances(arch, dep);
    let mapped: BTreeSet<&ServiceInstance> = out.assignments.iter().map(|a| &a.instance).collect();
    ensure!(mapped.len() == instances.len() && instances.iter().all(|i| mapped.contains(i)), "coverage not total");
    for a in &out.assignments {
        ensure!(eligible(dep, &a.instance).contains(&a.device), "{} -> {} not eligible", a.instance, a.device);
    }
    Ok(())
}

fn mapping_oracle() -> Check {
    let start = Instant::now();
    let arch = parse_architecture(SMART_BUILDING.architecture.text).unwrap();
    let ten = parse_deployment(SMART_BUILDING.deployment.text).unwrap();
    let big = generate_scaled_deployment(&ten, 110, 0);
    ensure!(big.devices.len() == 110, "scaled deployment has {} devices", big.devices.len());
    let mut assigned = 0;
    for dep in [&ten, &big] {
        let runs: Vec<String> = (0..3)
            .map(|_| to_canonical_json(&map_services(&arch, dep, 42).expect("maps")).expect("json"))
            .collect();
        ensure!(runs[0] == runs[1] && runs[1] == runs[2], "mapping JSON differs across runs");
        for seed in [0, 1, 42, 9_999] {
            let out = map_services(&arch, dep, seed).map_err(|e| e.to_string())?;
            mapping_sound(&arch, dep, &out)?;
            assigned += out.assignments.len();
        }
    }

    let two = parse_deployment(
        "deployment T uses V;
device left { region { Building:1; Floor:1; Room:1; } resources { } type: JavaSE; mobile: false; }
device right { region { Building:1; Floor:1; Room:1; } resources { } type: JavaSE; mobile: false; }",
    )
    .unwrap();
    let one = parse_architecture("architecture A uses V;\ncomputationalService S { in-region: Room; }").unwrap();
    let mut left = 0;
    for seed in 0..10_000 {
        if map_services(&one, &two, seed).unwrap().assignments[0].device == "left" {
            left += 1;
        }
    }
    ensure!((4_700..=5_300).contains(&left), "uniformity: left={left}, right={}", 10_000 - left);
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 10.0, "took {secs:.2}s (limit 10s)");
    Ok(format!("10 and 110 devices, {assigned} assignments eligible, 3 identical runs, left={left}/10000 in 5000±300, {secs:.2}s < 10s"))
}

// 4 ------------------------------------------------------------------

const LAB: &str = "vocabulary Lab;
regions { Building: integer; Floor: integer; Room: integer; }
structs { S { v: double; } }
resources { sensors { Probe { generate t: S; } } }
";
const LEVELS: [&str; 3] = ["Building", "Floor", "Room"];

/// Scope test written out level by level.
fn in_scope(src: &[i64], sub: &[i64], radius: u32, level: usize) -> bool {
    src.len() > level
        && sub.len() > level
        && (0..level).all(|l| src[l] == sub[l])
        && (src[level] - sub[level]).unsigned_abs() <= u64::from(radius)
}

fn routing_oracle() -> Check {
    let start = Instant::now();
    let mut rng = XorShift64Star::new(2024);
    let cells: Vec<[i64; 3]> =
        (0..50).map(|_| [1 + rng.pick(2) as i64, 1 + rng.pick(3) as i64, 1 + rng.pick(4) as i64]).collect();
    let mut dep = String::from("deployment D uses Lab;\n");
    for (i, c) in cells.iter().enumerate() {
        dep.push_str(&format!(
            "device n{i:02} {{ region {{ Building:{}; Floor:{}; Room:{}; }} resources {{ Probe }} type: JavaSE; mobile: false; }}\n",
            c[0], c[1], c[2]
        ));
    }
    let mut arch = String::from("architecture R uses Lab;\n");
    let mut scopes = BTreeMap::new();
    for s in 0..16 {
        let home = rng.pick(3);
        let level = rng.pick(home + 1);
        let radius = rng.pick(4) as u32;
        arch.push_str(&format!(
            "computationalService Sub{s:02} {{ consume t from hops:{radius}:{}; in-region: {}; }}\n",
            LEVELS[level], LEVELS[home]
        ));
        scopes.insert(format!("Sub{s:02}"), (radius, level));
    }
    let (v, a, d) = (parse_vocabulary(LAB).unwrap(), parse_architecture(&arch).unwrap(), parse_deployment(&dep).unwrap());
    let m = map_services(&a, &d, 7).map_err(|e| e.to_string())?;
    let pkgs = link(&a, &d, &v, &m, &generate_architecture_framework(&a, &v), &generate_vocabulary_framework(&v))
        .map_err(|e| e.to_string())?;
    let mut reg = HandlerRegistry::new();
    reg.register_driver("Probe", ANY_PLATFORM, |_, _| Box::new(NullDriver));
    for s in scopes.keys() {
        reg.register_handler(s, "onNewt", |_, _| Ok(()));
    }
    let mut sim = Simulator::load(pkgs, &reg).map_err(|e| e.to_string())?;

    let mut scn = Scenario::default();
    let mut sources = Vec::new();
    for p in 0..1000u64 {
        let dev = rng.pick(cells.len());
        scn.emit(10 * p, &format!("n{dev:02}"), "t", &[("v", "1.0")]);
        sources.push(cells[dev]);
    }
    let trace = sim.run_scenario(&scn, 0).map_err(|e| e.to_string())?;
    let mut delivered: BTreeMap<u64, BTreeSet<String>> = BTreeMap::new();
    for r in trace.of_kind(TraceKind::Deliver) {
        let msg: u64 = r.tag("msg").and_then(|m| m.parse().ok()).ok_or("DELIVER without msg")?;
        delivered.entry(msg).or_default().insert(r.detail[0].clone());
    }
    let instances = derive_instances(&a, &d);
    let mut discrepancies = 0;
    let mut total = 0;
    for (i, src) in sources.iter().enumerate() {
        let want: BTreeSet<String> = instances
            .iter()
            .filter(|inst| {
                let (radius, level) = scopes[&inst.service];
                let sub: Vec<i64> = inst.partition.entries().iter().map(|e| e.value).collect();
                in_scope(src, &sub, radius, level)
            })
            .map(ServiceInstance::id)
            .collect();
        total += want.len();
        if delivered.remove(&(i as u64 + 1)).unwrap_or_default() != want {
            discrepancies += 1;
        }
    }
    discrepancies += delivered.len();
    let secs = start.elapsed().as_secs_f64();
    ensure!(discrepancies == 0, "{discrepancies} discrepancies");
    ensure!(total > 0, "oracle expected no deliveries at all");
    ensure!(secs < 30.0, "took {secs:.2}s (limit 30s)");
    Ok(format!("1000 publications, {total} deliveries, 0 discrepancies, {secs:.2}s < 30s"))
}

// 5 ------------------------------------------------------------------

fn smart_building_e2e() -> Check {
    let t = run_bundle(&SMART_BUILDING, "badge_entry");
    let dep = parse_deployment(SMART_BUILDING.deployment.text).unwrap();
    let room_heaters: BTreeSet<&str> = dep
        .devices
        .iter()
        .filter(|d| d.hosts("Heater"))
        .filter(|d| d.region.entries().iter().map(|e| e.value).eq([15, 11, 1]))
        .map(|d| d.name.as_str())
        .collect();
    ensure!(room_heaters.len() == 1, "expected one heater in (15,11,1), found {room_heaters:?}");

    let req: Vec<_> = t.of_kind(TraceKind::Request).collect();
    let resp: Vec<_> = t.of_kind(TraceKind::Respond).collect();
    ensure!(req.len() == 1 && resp.len() == 1, "{} REQUEST / {} RESPOND", req.len(), resp.len());
    ensure!(req[0].detail[1] == "profile(12)", "request {:?}", req[0].detail);
    ensure!(req[0].tag("corr") == resp[0].tag("corr"), "correlation ids differ");
    ensure!(req[0].time >= 100 && req[0].time < 5000, "request at {}", req[0].time);

    let set: Vec<_> = t.of_kind(TraceKind::Actuate).filter(|r| r.detail[2] == "SetTemp(22.0)").collect();
    ensure!(set.len() == 1, "{} SetTemp(22.0) actuations", set.len());
    ensure!(room_heaters.contains(set[0].detail[0].as_str()) && set[0].detail[1] == "Heater", "SetTemp on {:?}", set[0].detail);
    let off: Vec<_> = t.of_kind(TraceKind::Actuate).filter(|r| r.detail[2] == "Off()").collect();
    ensure!(off.len() == 1 && off[0].time >= 5000, "Off actuations: {}", off.len());
    ensure!(t.count(TraceKind::Actuate) == 2, "{} actuations in total", t.count(TraceKind::Actuate));

    let path = SMART_BUILDING.golden_path("badge_entry");
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    ensure!(t.render() == want, "trace differs from {}", path.display());
    Ok(format!("1 REQUEST/RESPOND, SetTemp(22.0) at {}, Off() at {}, golden byte-identical", set[0].time, off[0].time))
}

// 6 ------------------------------------------------------------------

fn fire_e2e() -> Check {
    let dep = parse_deployment(FIRE_DETECTION.deployment.text).unwrap();
    let hosts = |r: &str| -> BTreeSet<String> {
        dep.devices.iter().filter(|d| d.hosts(r)).map(|d| d.name.clone()).collect()
    };
    let (alarms, phones) = (hosts("Alarm"), hosts("SmartPhoneApp"));
    let t = run_bundle(&FIRE_DETECTION, "fire");
    let act: Vec<_> = t.of_kind(TraceKind::Actuate).map(|r| r.detail[0].clone()).collect();
    let ntf: Vec<_> = t.of_kind(TraceKind::Notify).map(|r| r.detail[0].clone()).collect();
    ensure!(act.len() == alarms.len() && act.iter().cloned().collect::<BTreeSet<_>>() == alarms, "ACTUATE on {act:?}, alarms {alarms:?}");
    ensure!(ntf.len() == phones.len() && ntf.iter().cloned().collect::<BTreeSet<_>>() == phones, "NOTIFY on {ntf:?}, UIs {phones:?}");
    for s in ["smoke_only", "temp_only", "below_threshold"] {
        let n = run_bundle(&FIRE_DETECTION, s).count(TraceKind::Actuate);
        ensure!(n == 0, "{s}: {n} actuations");
    }

    let t = run_bundle(&SMART_BUILDING, "floor_average");
    let last = t
        .of_kind(TraceKind::Publish)
        .filter(|r| r.detail[1] == "floorAvgTempMeasurement")
        .last()
        .ok_or("no floorAvgTempMeasurement")?;
    let value: f64 = last.detail[3]
        .split("tempValue=")
        .nth(1)
        .and_then(|v| v.split([',', '}']).next())
        .and_then(|v| v.parse().ok())
        .ok_or("unreadable floor payload")?;
    let want = (20.0 + 24.0) / 2.0;
    ensure!((value - want).abs() <= 1e-9, "FloorAvgTemp {value} != {want} ± 1e-9");
    Ok(format!(
        "{} alarms ACTUATE, {} UIs NOTIFY, single conditions 0 ACTUATE, FloorAvgTemp={value:?} (22.0 ± 1e-9)",
        alarms.len(),
        phones.len()
    ))
}

// 7 ------------------------------------------------------------------

/// Non-blank lines that are not `//` comments, counted by hand.
fn recount(text: &str) -> usize {
    text.split('\n').filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with("//")).count()
}

fn recount_ratio(bundle: &Bundle) -> f64 {
    let v = parse_vocabulary(bundle.vocabulary.text).unwrap();
    let a = parse_architecture(bundle.architecture.text).unwrap();
    let d = parse_deployment(bundle.deployment.text).unwrap();
    let fw = generate_architecture_framework(&a, &v);
    let dm = generate_vocabulary_framework(&v);
    let mut generated = recount(&to_canonical_json(&fw).unwrap()) + recount(&to_canonical_json(&dm).unwrap());
    generated += render_scaffolds(&fw, &dm, "neutral").unwrap().iter().map(|s| recount(&s.text)).sum::<usize>();
    let m = map_services(&a, &d, 0).unwrap();
    generated += link(&a, &d, &v, &m, &fw, &dm).unwrap().iter().map(|p| recount(&to_canonical_json(p).unwrap())).sum::<usize>();
    let handwritten = [bundle.vocabulary.text, bundle.architecture.text, &print_deployment(&d)]
        .iter()
        .map(|t| recount(t))
        .sum::<usize>()
        + bundle.handler_sources.iter().map(|s| recount(s.text)).sum::<usize>();
    generated as f64 / (generated + handwritten) as f64
}

fn scaled_line_counts() -> Check {
    const SIZES: [(usize, usize); 10] =
        [(10, 81), (34, 273), (50, 401), (62, 497), (86, 689), (110, 881), (200, 1601), (300, 2401), (350, 2801), (500, 4001)];
    for b in BUNDLES {
        let template = parse_deployment(b.deployment.text).unwrap();
        let base = bundle_metrics(&b, Some(10)).map_err(|e| e.to_string())?;
        for (n, lines) in SIZES {
            let got = print_deployment(&generate_scaled_deployment(&template, n, 0)).lines().count();
            ensure!(got == lines, "{}: n={n} printed {got} lines, want {lines}", b.name);
            let row = bundle_metrics(&b, Some(n)).map_err(|e| e.to_string())?;
            ensure!(row.deployment == lines, "{}: n={n} counted {} deployment lines", b.name, row.deployment);
            ensure!(
                (row.vocabulary, row.architecture, row.handlers) == (base.vocabulary, base.architecture, base.handlers),
                "{}: n={n} changed vocabulary/architecture/handler counts",
                b.name
            );
        }
    }
    let mut ratios = Vec::new();
    for b in BUNDLES {
        let row = bundle_metrics(&b, None).map_err(|e| e.to_string())?;
        let oracle = recount_ratio(&b);
        ensure!(row.ratio >= 0.80, "{}: ratio {:.4} < 0.80", b.name, row.ratio);
        ensure!((row.ratio - oracle).abs() < 1e-12, "{}: ratio {} != recount {}", b.name, row.ratio, oracle);
        ratios.push(format!("{} {:.4}", b.name, row.ratio));
    }
    Ok(format!("10 sizes exact for both bundles, counts stable, ratio ≥ 0.80 = recount ({})", ratios.join(", ")))
}

// 8 ------------------------------------------------------------------

fn evolution() -> Check {
    let v = parse_vocabulary(SMART_BUILDING.vocabulary.text).unwrap();
    let old_text = SMART_BUILDING.architecture.text;
    let new_text = old_text.replace("  consume badgeDisappeared from hops:0:Room;\n", "");
    ensure!(new_text != old_text, "consume line not found");
    let old = generate_architecture_framework(&parse_architecture(old_text).unwrap(), &v);
    let new = generate_architecture_framework(&parse_architecture(&new_text).map_err(|e| e.to_string())?, &v);
    let r = diff_frameworks(&old, &new, &BTreeSet::new());
    let gone = HandlerKey::new("Proximity", "onNewbadgeDisappeared");
    ensure!(r.removed_hooks == [gone.clone()], "removed {:?}", r.removed_hooks);
    let others: BTreeSet<HandlerKey> = old.hook_keys().into_iter().filter(|k| *k != gone).collect();
    let kept: BTreeSet<HandlerKey> = r.unchanged_hooks.iter().cloned().collect();
    ensure!(kept == others, "unchanged {kept:?}, want {others:?}");
    ensure!(r.added_hooks.is_empty(), "added {:?}", r.added_hooks);
    Ok(format!("removed {{Proximity.onNewbadgeDisappeared}}, {} other hooks unchanged", kept.len()))
}

// 9 ------------------------------------------------------------------

fn iotc(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_iotc")).args(args).output().map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "iotc {}: {}", args.join(" "), String::from_utf8_lossy(&out.stderr));
    Ok(out.stdout)
}

/// Relative path to contents for every file under `dir`.
fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for e in std::fs::read_dir(dir).expect("readable dir") {
            let p = e.expect("dir entry").path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                out.insert(p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

fn determinism() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = tmp.path();
    let bundle_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../apps/bundles/smart_building");
    let f = |n: &str| bundle_dir.join(n).to_string_lossy().into_owned();
    let (svl, sal, sdl, scn) = (f("building.svl"), f("building.sal"), f("building.sdl"), f("badge_entry.scn"));
    let s = |p: PathBuf| p.to_string_lossy().into_owned();

    let mut maps = Vec::new();
    let mut gens = Vec::new();
    let mut links = Vec::new();
    let mut traces = Vec::new();
    for i in 0..3 {
        let run = root.join(format!("run{i}"));
        let mapping = s(run.join("mapping.json"));
        iotc(&["map", &svl, &sal, &sdl, "--seed", "42", "--out", &mapping])?;
        maps.push(std::fs::read(&mapping).map_err(|e| e.to_string())?);
        iotc(&["generate", &svl, &sal, "--out", &s(run.join("gen"))])?;
        gens.push(snapshot(&run.join("gen")));
        iotc(&["link", &svl, &sal, &sdl, &mapping, "--out", &s(run.join("pkg"))])?;
        links.push(snapshot(&run.join("pkg")));
        let trace = s(run.join("out.trace"));
        iotc(&["simulate", "--packages", &s(run.join("pkg")), "--app", "smart-building", "--scenario", &scn, "--trace", &trace, "--seed", "42"])?;
        traces.push(std::fs::read(&trace).map_err(|e| e.to_string())?);
    }
    let same = |name: &str, ok: bool| if ok { Ok(()) } else { Err(format!("{name} output differs across runs")) };
    same("map", maps.windows(2).all(|w| w[0] == w[1]))?;
    same("generate", gens.windows(2).all(|w| w[0] == w[1]))?;
    same("link", links.windows(2).all(|w| w[0] == w[1]))?;
    same("simulate", traces.windows(2).all(|w| w[0] == w[1]))?;
    ensure!(!gens[0].is_empty() && !links[0].is_empty() && !traces[0].is_empty(), "empty outputs");
    Ok(format!("map, generate ({} files), link ({} packages), simulate identical over 3 runs", gens[0].len(), links[0].len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("parse/round-trip", parse_round_trip),
        ("validation mutations", validation_mutations),
        ("mapping oracle", mapping_oracle),
        ("routing oracle", routing_oracle),
        ("smart-building end-to-end", smart_building_e2e),
        ("fire-detection end-to-end", fire_e2e),
        ("line-count table", scaled_line_counts),
        ("evolution", evolution),
        ("determinism", determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
