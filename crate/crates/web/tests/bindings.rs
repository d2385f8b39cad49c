use malmquist_web::{profile, synthesize, verify};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).expect("valid JSON")
}

#[test]
fn verify_returns_report() {
    let r = parse(&verify("a := z + 1; rhs := 2*pi*i*a; w := exp(2*pi*i*z)"));
    assert_eq!(r["schema"], "malmquist-lab/1");
    assert_eq!(r["verdict"], true);
    assert_eq!(r["exit_code"], 0);
}

#[test]
fn synthesize_reports_family_and_trace() {
    let r = parse(&synthesize("a := z; a1 := 2*i; a0 := 1 + pi*i/2*z"));
    assert_eq!(r["exit_code"], 0, "{r}");
    assert_eq!(r["result"]["solution"]["h"], "z");
    assert!(
        r["result"]["explanation"]["steps"]
            .as_array()
            .unwrap()
            .len()
            >= 2
    );
}

#[test]
fn profile_includes_rows_and_zeros() {
    let r = parse(&profile("f := exp(z) + z", 5.0, 40.0, 8));
    assert_eq!(r["exit_code"], 0, "{r}");
    let p = &r["result"]["profile"];
    assert_eq!(p["rows"].as_array().unwrap().len(), 8);
    assert!(!p["zeros"]["zeros"].as_array().unwrap().is_empty());
}

#[test]
fn errors_are_reports_too() {
    let r = parse(&verify("a := (z"));
    assert_eq!(r["exit_code"], 2);
    assert!(r["error"].as_str().unwrap().contains("1:8"));
    assert_eq!(parse(&profile("f := exp(z)", 10.0, 1.0, 8))["exit_code"], 2);
}

fn page_preset(id: &str) -> String {
    let html = include_str!("../www/index.html");
    let open = format!("<textarea id=\"{id}\"");
    let start = html.find(&open).expect("textarea present");
    let body = &html[start..];
    let body = &body[body.find('>').unwrap() + 1..];
    body[..body.find("</textarea>").unwrap()].to_string()
}

#[test]
fn page_presets_succeed() {
    assert_eq!(parse(&verify(&page_preset("verify-src")))["verdict"], true);
    assert_eq!(
        parse(&synthesize(&page_preset("synth-src")))["exit_code"],
        0
    );
    assert_eq!(
        parse(&profile(&page_preset("prof-src"), 5.0, 60.0, 10))["exit_code"],
        0
    );
}
