mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use common::*;
use iotc_core::package::{FactoryKey, HandlerKey};
use iotc_sim::{
    parse_scenario, HandlerRegistry, Payload, Scenario, SimError, Simulator, TableDriver, TraceKind, Value,
    ANY_PLATFORM,
};

const CTRL: &str = "architecture A uses Lab;
computationalService Ctrl {
  consume t from hops:0:Room;
  request rec;
  command On(level) to hops:0:Room;
  in-region: Room;
}
";

fn store(rows: &[(i64, f64)]) -> TableDriver {
    let mut d = TableDriver::default();
    for (k, v) in rows {
        d.rows.insert(k.to_string(), [("v".to_string(), Value::Double(*v))].into());
    }
    d
}

fn ctrl_registry(rows: Vec<(i64, f64)>) -> HandlerRegistry {
    let mut reg = HandlerRegistry::new();
    null_drivers(&mut reg);
    reg.register_driver("Store", ANY_PLATFORM, move |_, _| Box::new(store(&rows)));
    reg.register_handler("Ctrl", "onNewt", |ctx, ev| {
        let key = ev.f64("v").unwrap() as i32;
        if let Some(p) = ctx.request("rec", Value::Integer(key))? {
            ctx.command("On", vec![p["v"].clone()])?;
        }
        Ok(())
    });
    reg
}

fn lab() -> String {
    deployment(&[
        device("lamp-1", (1, 1, 1), &["Lamp", "Probe"]),
        device("lamp-2", (1, 1, 1), &["Lamp"]),
        device("lamp-3", (1, 1, 2), &["Lamp", "Probe"]),
        device("db-far", (2, 1, 1), &["Store"]),
        device("db-near", (1, 2, 1), &["Store"]),
    ])
}

#[test]
fn request_then_command_reaches_room_lamps() {
    let mut sim = Simulator::load(packages(CTRL, &lab(), 0), &ctrl_registry(vec![(12, 22.0)])).unwrap();
    assert_eq!(sim.node_count(), 5);
    let scn = parse_scenario("at 100 device lamp-1 emit t v=12.0\n").unwrap();
    let trace = sim.run_scenario(&scn, 0).unwrap();
    assert_eq!(
        trace.render(),
        "100\tPUBLISH\tlamp-1\tt\tmsg=1\t{v=12.0}
101\tDELIVER\tCtrl@Building:1/Floor:1/Room:1\tt\tmsg=1
101\tREQUEST\tCtrl@Building:1/Floor:1/Room:1\trec(12)\tcorr=1\tdb-near
103\tRESPOND\tdb-near\tStore\trec\tcorr=1\t{v=22.0}
103\tCOMMAND\tCtrl@Building:1/Floor:1/Room:1\tOn(22.0)\thops:0:Room\tcmd=1
104\tACTUATE\tlamp-1\tLamp\tOn(22.0)\tcmd=1
104\tACTUATE\tlamp-2\tLamp\tOn(22.0)\tcmd=1
"
    );
}

/// Responder choice by prefix length, then by name.
fn oracle_responder(requester: &[i64], responders: &[(&str, [i64; 3])]) -> String {
    let mut best: Option<(usize, &str)> = None;
    for (name, path) in responders {
        let common = requester.iter().zip(path).take_while(|(a, b)| a == b).count();
        let better = match best {
            None => true,
            Some((c, n)) => common > c || (common == c && *name < n),
        };
        if better {
            best = Some((common, name));
        }
    }
    best.unwrap().1.to_string()
}

#[test]
fn responder_selection_matches_prefix_oracle() {
    let layouts: [&[(&str, [i64; 3])]; 4] = [
        &[("db-b", [2, 1, 1]), ("db-a", [1, 3, 4])],
        &[("db-z", [1, 1, 2]), ("db-y", [1, 1, 3])],
        &[("solo", [2, 3, 4])],
        &[("db-1", [2, 1, 1]), ("db-0", [2, 2, 1]), ("db-2", [1, 1, 1])],
    ];
    for layout in layouts {
        let mut devs = vec![device("probe", (1, 1, 1), &["Probe"])];
        for (name, [b, f, r]) in layout {
            devs.push(device(name, (*b, *f, *r), &["Store"]));
        }
        let mut sim = Simulator::load(packages(CTRL, &deployment(&devs), 0), &ctrl_registry(vec![])).unwrap();
        let trace = sim.run_scenario(&parse_scenario("at 0 device probe emit t v=1.0").unwrap(), 0).unwrap();
        let req: Vec<_> = trace.of_kind(TraceKind::Request).collect();
        assert_eq!(req.len(), 1);
        assert_eq!(req[0].detail[3], oracle_responder(&[1, 1, 1], layout), "{layout:?}");
        let resp: Vec<_> = trace.of_kind(TraceKind::Respond).collect();
        assert_eq!(resp[0].detail.last().unwrap(), "none");
        assert_eq!(trace.count(TraceKind::Command), 0);
    }
}

#[test]
fn causality_and_correlation() {
    let mut sim = Simulator::load(packages(CTRL, &lab(), 0), &ctrl_registry(vec![(1, 5.0), (2, 6.0)])).unwrap();
    let scn = parse_scenario(
        "at 0 device lamp-1 emit t v=1.0\nat 0 device lamp-3 emit t v=2.0\nat 1 device lamp-1 emit t v=2.0\nat 7 device lamp-1 emit t v=9.0\n",
    )
    .unwrap();
    let trace = sim.run_scenario(&scn, 0).unwrap();
    assert!(trace.records.windows(2).all(|w| w[0].time <= w[1].time));

    let published: BTreeMap<&str, u64> =
        trace.of_kind(TraceKind::Publish).map(|r| (r.tag("msg").unwrap(), r.time)).collect();
    for d in trace.of_kind(TraceKind::Deliver) {
        assert!(d.time > published[d.tag("msg").unwrap()]);
    }
    let requests: Vec<&str> = trace.of_kind(TraceKind::Request).map(|r| r.tag("corr").unwrap()).collect();
    let responses: Vec<&str> = trace.of_kind(TraceKind::Respond).map(|r| r.tag("corr").unwrap()).collect();
    assert_eq!(requests.len(), 4);
    assert_eq!(requests.iter().collect::<BTreeSet<_>>(), responses.iter().collect::<BTreeSet<_>>());
    assert_eq!(responses.iter().collect::<BTreeSet<_>>().len(), responses.len());
}

#[test]
fn instance_is_blocked_while_waiting() {
    let mut sim = Simulator::load(packages(CTRL, &lab(), 0), &ctrl_registry(vec![])).unwrap();
    // The second reading lands while the first request is outstanding.
    let scn = parse_scenario("at 0 device lamp-1 emit t v=1.0\nat 1 device lamp-1 emit t v=2.0").unwrap();
    let trace = sim.run_scenario(&scn, 0).unwrap();
    let times: Vec<u64> = trace.of_kind(TraceKind::Deliver).map(|r| r.time).collect();
    assert_eq!(times, [1, 3]);
}

#[test]
fn same_time_deliveries_follow_instance_id() {
    let arch = "architecture A uses Lab;
computationalService Zeta { consume t from hops:0:Building; in-region: Building; }
computationalService Alpha { consume t from hops:0:Building; in-region: Room; }";
    let dep = deployment(&[device("p", (1, 1, 2), &["Probe"]), device("q", (1, 1, 1), &["Probe"])]);
    let mut reg = HandlerRegistry::new();
    null_drivers(&mut reg);
    reg.register_handler("Zeta", "onNewt", |_, _| Ok(()));
    reg.register_handler("Alpha", "onNewt", |_, _| Ok(()));
    let mut sim = Simulator::load(packages(arch, &dep, 0), &reg).unwrap();
    let trace = sim.run_scenario(&parse_scenario("at 0 device p emit t v=0.0").unwrap(), 0).unwrap();
    let order: Vec<&str> = trace.of_kind(TraceKind::Deliver).map(|r| r.detail[0].as_str()).collect();
    let mut sorted = order.clone();
    sorted.sort();
    assert_eq!(order, sorted);
    assert_eq!(order.len(), 3);
}

#[test]
fn repeated_runs_are_identical() {
    let mut sim = Simulator::load(packages(CTRL, &lab(), 3), &ctrl_registry(vec![(1, 5.0)])).unwrap();
    let scn = parse_scenario("at 0 device lamp-1 emit t v=1.0\nat 0 device lamp-3 emit t v=1.0").unwrap();
    let a = sim.run_scenario(&scn, 0).unwrap().render();
    let b = sim.run_scenario(&scn, 0).unwrap().render();
    let mut fresh = Simulator::load(packages(CTRL, &lab(), 3), &ctrl_registry(vec![(1, 5.0)])).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, fresh.run_scenario(&scn, 0).unwrap().render());
}

#[test]
fn ui_command_reaches_lamps_in_its_room() {
    let dep = deployment(&[
        device("panel", (1, 1, 1), &["Panel"]),
        device("l1", (1, 1, 1), &["Lamp"]),
        device("l2", (1, 1, 2), &["Lamp"]),
    ]);
    let mut reg = HandlerRegistry::new();
    null_drivers(&mut reg);
    let mut sim = Simulator::load(packages("architecture A uses Lab;", &dep, 0), &reg).unwrap();
    let trace = sim.run_scenario(&parse_scenario("at 3 device panel ui Dim()").unwrap(), 0).unwrap();
    assert_eq!(
        trace.render(),
        "3\tCOMMAND\tpanel/Panel\tDim()\thops:0:Room\tcmd=1\n4\tACTUATE\tl1\tLamp\tDim()\tcmd=1\n"
    );
}

#[test]
fn user_interface_actions_are_notifications() {
    let arch = "architecture A uses Lab;
computationalService Tell { consume t from hops:0:Building; command Show(text) to hops:0:Building; in-region: Building; }";
    let dep = deployment(&[device("p", (1, 1, 1), &["Probe"]), device("ui", (1, 3, 4), &["Panel"]), device("x", (2, 1, 1), &["Panel"])]);
    let mut reg = HandlerRegistry::new();
    null_drivers(&mut reg);
    reg.register_handler("Tell", "onNewt", |ctx, _| ctx.command("Show", vec!["hot".into()]));
    let mut sim = Simulator::load(packages(arch, &dep, 0), &reg).unwrap();
    let trace = sim.run_scenario(&parse_scenario("at 0 device p emit t v=1.0").unwrap(), 0).unwrap();
    let n: Vec<&str> = trace.of_kind(TraceKind::Notify).map(|r| r.detail[0].as_str()).collect();
    assert_eq!(n, ["ui"]);
    assert_eq!(trace.count(TraceKind::Actuate), 0);
}

#[test]
fn shared_driver_state_is_observable() {
    let seen = Arc::new(Mutex::new(Vec::new()));
    struct Rec(Arc<Mutex<Vec<String>>>);
    impl iotc_sim::Driver for Rec {
        fn on_action(&mut self, action: &str, args: &[Value]) -> Result<(), SimError> {
            self.0.lock().unwrap().push(format!("{action}{args:?}"));
            Ok(())
        }
    }
    let mut reg = ctrl_registry(vec![(4, 1.5)]);
    let s = Arc::clone(&seen);
    reg.register_driver("Lamp", ANY_PLATFORM, move |_, _| Box::new(Rec(Arc::clone(&s))));
    let mut sim = Simulator::load(packages(CTRL, &lab(), 0), &reg).unwrap();
    sim.run_scenario(&parse_scenario("at 0 device lamp-3 emit t v=4.0").unwrap(), 0).unwrap();
    assert_eq!(*seen.lock().unwrap(), ["On[Double(1.5)]"]);
}

#[test]
fn load_reports_every_missing_key() {
    let pkgs = packages(CTRL, &lab(), 0);
    let err = Simulator::load(pkgs.clone(), &HandlerRegistry::new()).unwrap_err();
    assert_eq!(err, SimError::MissingHandler(vec![HandlerKey::new("Ctrl", "onNewt")]));
    assert_eq!(err.to_string(), "E-MISSING-HANDLER: no handler registered for (Ctrl, onNewt)");

    let mut reg = HandlerRegistry::new();
    reg.register_handler("Ctrl", "onNewt", |_, _| Ok(()));
    reg.register_driver("Lamp", "JavaSE", |_, _| Box::new(iotc_sim::NullDriver));
    match Simulator::load(pkgs, &reg).unwrap_err() {
        SimError::MissingDriver(keys) => assert_eq!(
            keys,
            ["Probe", "Store"].map(|r| FactoryKey::new(r, "JavaSE")).to_vec()
        ),
        other => panic!("{other}"),
    }
}

#[test]
fn empty_inputs() {
    let mut sim = Simulator::load(Vec::new(), &HandlerRegistry::new()).unwrap();
    assert_eq!(sim.node_count(), 0);
    assert!(sim.run_scenario(&Scenario::default(), 0).unwrap().records.is_empty());
    let mut sim = Simulator::load(packages(CTRL, &lab(), 0), &ctrl_registry(vec![])).unwrap();
    assert!(sim.run_scenario(&parse_scenario("# nothing\n").unwrap(), 9).unwrap().records.is_empty());
}

#[test]
fn end_time_cuts_the_run() {
    let mut sim = Simulator::load(packages(CTRL, &lab(), 0), &ctrl_registry(vec![(1, 2.0)])).unwrap();
    let trace = sim.run_scenario(&parse_scenario("at 0 device lamp-1 emit t v=1.0\nend 1\nat 2 device lamp-1 emit t v=1.0").unwrap(), 0).unwrap();
    assert!(trace.records.iter().all(|r| r.time <= 3));
    assert_eq!(trace.count(TraceKind::Publish), 1);
    assert_eq!(trace.count(TraceKind::Actuate), 0);
}

#[test]
fn typing_errors() {
    let mut sim = Simulator::load(packages(CTRL, &lab(), 0), &ctrl_registry(vec![])).unwrap();
    for (text, code) in [
        ("at 0 device lamp-1 emit t v=true", "E-PAYLOAD-TYPE"),
        ("at 0 device lamp-1 emit t", "E-PAYLOAD-TYPE"),
        ("at 0 device lamp-1 emit t v=1.0 w=2.0", "E-PAYLOAD-TYPE"),
        ("at 0 device ghost emit t v=1.0", "E-SCENARIO-REF"),
        ("at 0 device lamp-2 emit t v=1.0", "E-SCENARIO-REF"),
    ] {
        let err = sim.run_scenario(&parse_scenario(text).unwrap(), 0).unwrap_err();
        assert!(err.to_string().starts_with(code), "{text}: {err}");
    }
}

type Misuse = Box<dyn Fn(&mut iotc_sim::ServiceContext<'_>) -> Result<(), SimError> + Send + Sync>;

#[test]
fn handler_misuse_is_reported() {
    let cases: Vec<(&str, Misuse)> = vec![
        ("E-ARG-ARITY", Box::new(|ctx| ctx.command("On", vec![]))),
        ("E-PAYLOAD-TYPE", Box::new(|ctx| ctx.command("On", vec![Value::Integer(1)]))),
        ("E-UNDECLARED", Box::new(|ctx| ctx.command("Dim", vec![]))),
        ("E-UNDECLARED", Box::new(|ctx| ctx.publish("t", Payload::new()))),
        ("E-PAYLOAD-TYPE", Box::new(|ctx| ctx.request("rec", Value::Double(1.0)).map(|_| ()))),
    ];
    for (code, f) in cases {
        let mut reg = ctrl_registry(vec![]);
        reg.register_handler("Ctrl", "onNewt", move |ctx, _| f(ctx));
        let mut sim = Simulator::load(packages(CTRL, &lab(), 0), &reg).unwrap();
        let err = sim.run_scenario(&parse_scenario("at 0 device lamp-1 emit t v=1.0").unwrap(), 0).unwrap_err();
        assert!(err.to_string().starts_with(code), "{code}: {err}");
    }
}

proptest::proptest! {
    #[test]
    fn random_scenarios_are_causal_and_reproducible(
        steps in proptest::collection::vec((0u64..50, 0usize..2, 0i64..4), 0..25),
    ) {
        let pkgs = packages(CTRL, &lab(), 1);
        let reg = ctrl_registry(vec![(1, 18.0), (2, 19.5), (3, 21.0)]);
        let mut text = String::new();
        for (at, d, v) in &steps {
            text.push_str(&format!("at {at} device {} emit t v={v}.0\n", ["lamp-1", "lamp-3"][*d]));
        }
        let scn = parse_scenario(&text).unwrap();
        let a = Simulator::load(pkgs.clone(), &reg).unwrap().run_scenario(&scn, 0).unwrap();
        let b = Simulator::load(pkgs, &reg).unwrap().run_scenario(&scn, 0).unwrap();
        proptest::prop_assert_eq!(a.render(), b.render());
        proptest::prop_assert!(a.records.windows(2).all(|w| w[0].time <= w[1].time));
        let published: BTreeMap<String, u64> =
            a.of_kind(TraceKind::Publish).map(|r| (r.tag("msg").unwrap().to_string(), r.time)).collect();
        for d in a.of_kind(TraceKind::Deliver) {
            proptest::prop_assert!(d.time > published[d.tag("msg").unwrap()]);
        }
        let mut req: Vec<&str> = a.of_kind(TraceKind::Request).map(|r| r.tag("corr").unwrap()).collect();
        let mut resp: Vec<&str> = a.of_kind(TraceKind::Respond).map(|r| r.tag("corr").unwrap()).collect();
        req.sort();
        resp.sort();
        proptest::prop_assert_eq!(req, resp);
        let hits = steps.iter().filter(|(_, _, v)| (1..=3).contains(v)).count();
        proptest::prop_assert_eq!(a.count(TraceKind::Command), hits);
    }
}
