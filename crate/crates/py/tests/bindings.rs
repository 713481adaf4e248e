use spinlift::cli::{render, CliError, Format};
use spinlift_py::{command_by_name, execute, Request};

fn req(command: &str, input: Option<&str>) -> Request {
    Request {
        command: command.to_string(),
        input: input.map(str::to_string),
        ..Request::default()
    }
}

#[test]
fn every_command_name_resolves() {
    for name in [
        "pi1",
        "spin",
        "involution",
        "h2",
        "extension",
        "keylemma",
        "sw",
        "selftest",
    ] {
        assert_eq!(command_by_name(name).unwrap().name(), name);
    }
    assert!(command_by_name("Pi1").is_none());
}

#[test]
fn pi1_of_pgl2() {
    let (report, ok) = execute(&req("pi1", Some(r#"{"datum": "PGL2"}"#))).unwrap();
    assert!(ok);
    assert_eq!(report["invariant_factors"], serde_json::json!([2]));
    assert_eq!(report["command"], "pi1");
}

#[test]
fn reports_match_the_cli_for_the_same_seed() {
    let r = Request {
        trials: Some(5),
        seed: 11,
        ..req("keylemma", None)
    };
    let a = render(&execute(&r).unwrap().0, Format::Json);
    let b = render(&execute(&r).unwrap().0, Format::Json);
    assert_eq!(a, b);
    assert!(a.contains("\"seed\": 11"));
}

#[test]
fn errors_keep_their_kind() {
    assert!(matches!(
        execute(&req("pi1", Some("{\"datum\": "))),
        Err(CliError::Parse { .. })
    ));
    assert!(matches!(
        execute(&req("pi1", Some(r#"{"datum": "XY7"}"#))),
        Err(CliError::Invalid { .. })
    ));
    assert!(matches!(
        execute(&req("nope", None)),
        Err(CliError::Usage(_))
    ));
    let small = Request {
        bound: Some(0),
        ..req("h2", Some(r#"{"group": "C2", "coefficients": [2]}"#))
    };
    assert!(matches!(execute(&small), Err(CliError::SizeBound { .. })));
}
