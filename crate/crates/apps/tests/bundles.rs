use iotc_apps::{bundle_by_name, generate_scaled_deployment, BUNDLES, FIRE_DETECTION, SMART_BUILDING};
use iotc_core::pipeline::{compile, SourceText, Sources};
use iotc_core::syntax::{parse_deployment, print_deployment};
use iotc_sim::Simulator;

#[test]
fn every_bundle_validates_links_and_loads() {
    for b in BUNDLES {
        let c = compile(&b.sources(), 0).unwrap();
        assert!(c.checked.diagnostics.is_empty(), "{}: {:?}", b.name, c.checked.diagnostics);
        let sim = Simulator::load(c.packages.clone(), &b.registry()).unwrap();
        assert_eq!(sim.node_count(), c.packages.len());
    }
    assert_eq!(Simulator::load(compile(&SMART_BUILDING.sources(), 0).unwrap().packages, &SMART_BUILDING.registry()).unwrap().node_count(), 10);
}

#[test]
fn lookup_by_name() {
    assert_eq!(bundle_by_name("fire-detection").unwrap().name, FIRE_DETECTION.name);
    assert!(bundle_by_name("lighting").is_none());
    assert!(SMART_BUILDING.scenario("badge_entry").is_some());
    assert!(SMART_BUILDING.scenario("badge_entry.scn").is_some());
}

#[test]
fn fire_fixture_has_six_alarms() {
    let d = parse_deployment(FIRE_DETECTION.deployment.text).unwrap();
    assert_eq!(d.devices.iter().filter(|x| x.hosts("Alarm")).count(), 6);
    assert_eq!(d.devices.iter().filter(|x| x.hosts("SmartPhoneApp")).count(), 3);
}

#[test]
fn scaled_line_counts() {
    let template = parse_deployment(SMART_BUILDING.deployment.text).unwrap();
    for (n, lines) in [(1, 9), (10, 81), (34, 273), (50, 401), (62, 497), (86, 689), (110, 881), (200, 1601), (300, 2401), (350, 2801), (500, 4001)] {
        let d = generate_scaled_deployment(&template, n, 0);
        assert_eq!(d.devices.len(), n);
        assert_eq!(print_deployment(&d).lines().count(), lines, "n={n}");
    }
}

#[test]
fn scaled_layout() {
    let template = parse_deployment(FIRE_DETECTION.deployment.text).unwrap();
    let d = generate_scaled_deployment(&template, 30, 5);
    assert_eq!(d.devices[0].region.to_string(), "Building:1/Floor:2/Room:2");
    assert_eq!(d.devices[19].region.to_string(), "Building:1/Floor:1/Room:1");
    assert_eq!(d.devices[0].name, "RoomNode-1");
    assert_eq!(d.devices[6].name, "Phone-7");
    assert_eq!(d.devices[9].name, "ComputeNode-10");
    assert_eq!(d.devices[10].resources, template.devices[0].resources);
    assert!(d.devices[6].mobile);
    let names: std::collections::BTreeSet<&str> = d.devices.iter().map(|x| x.name.as_str()).collect();
    assert_eq!(names.len(), 30);
    assert_eq!(generate_scaled_deployment(&template, 30, 5), d);

    // Round-trips through the canonical printer.
    let text = print_deployment(&d);
    assert_eq!(print_deployment(&parse_deployment(&text).unwrap()), text);
}

#[test]
fn scaled_smart_building_compiles() {
    let template = parse_deployment(SMART_BUILDING.deployment.text).unwrap();
    let text = print_deployment(&generate_scaled_deployment(&template, 110, 0));
    let src = Sources { deployment: SourceText { name: "scaled.sdl", text: &text }, ..SMART_BUILDING.sources() };
    let c = compile(&src, 1).unwrap();
    Simulator::load(c.packages, &SMART_BUILDING.registry()).unwrap();
}

#[test]
fn metrics_rows() {
    use iotc_apps::metrics::bundle_metrics;
    for b in BUNDLES {
        let base = bundle_metrics(&b, Some(10)).unwrap();
        assert_eq!(base.deployment, 81);
        for n in [1, 34, 500] {
            let row = bundle_metrics(&b, Some(n)).unwrap();
            assert_eq!(row.deployment, 8 * n + 1);
            assert_eq!((row.vocabulary, row.architecture, row.handlers), (base.vocabulary, base.architecture, base.handlers));
        }
        println!("{}: {base:?}", b.name);
    }
}
