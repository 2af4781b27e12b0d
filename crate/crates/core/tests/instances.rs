use std::path::PathBuf;

use galtour::dissociation::{intourability_field, is_galtourable};
use galtour::permgroup::Bounds;
use galtour::presets;
use galtour::Error;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn file_instance_matches_the_preset() {
    let file = presets::load(&data("d8.json"), Bounds::default()).unwrap();
    let preset = presets::load("radical:a=2,n=4", Bounds::default()).unwrap();
    assert_eq!(file.group().order(), preset.group().order());
    assert_eq!(file.field_count(), preset.field_count());
    for ctx in [&file, &preset] {
        let l = ctx.field("Q(4rt2)").unwrap();
        assert!(is_galtourable(ctx, l, ctx.base()).unwrap());
        let rep = intourability_field(ctx, l, ctx.base()).unwrap();
        assert_eq!((rep.degrees.gal, rep.degrees.int), (4, 1));
    }
    let with_prefix = presets::load(&format!("file:{}", data("d8.json")), Bounds::default()).unwrap();
    assert_eq!(with_prefix.named_fields(), file.named_fields());
}

#[test]
fn duplicate_field_names_are_rejected() {
    let e = presets::load(&data("duplicate.json"), Bounds::default()).unwrap_err();
    assert!(matches!(e, Error::Parse(ref m) if m.contains("duplicate")), "{e}");
}

#[test]
fn missing_files_and_bad_selectors_are_user_errors() {
    for s in [data("absent.json"), "radical:a=2".into(), "cyclo-radical:n=1,d=3".into(), "group:M24".into()] {
        let e = presets::load(&s, Bounds::default()).unwrap_err();
        assert!(!e.is_internal(), "{s}: {e}");
    }
}

#[test]
fn enumeration_bound_is_enforced() {
    let tight = Bounds { enumeration: 60, ..Bounds::default() };
    assert!(matches!(
        presets::load("selmer-serre:n=5", tight),
        Err(Error::BoundExceeded { .. })
    ));
}

#[test]
fn dot_export_is_deterministic() {
    let a = presets::load("radical:a=2,n=6", Bounds::default()).unwrap().to_dot();
    let b = presets::load("radical:a=2,n=6", Bounds::default()).unwrap().to_dot();
    assert_eq!(a, b);
    assert!(a.starts_with("digraph"));
    assert!(a.contains("Q(6rt2) [deg 6 over Q]"));
    assert!(a.contains("color=\"black:black\""));
}
