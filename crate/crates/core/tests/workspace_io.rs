use apalg::freqmod::Generator;
use apalg::workspace::Workspace;
use apalg::Error;

fn gen(name: &str, value: &str) -> Generator {
    Generator { name: name.into(), value: value.into(), independent: true }
}

fn sample() -> Workspace {
    let mut ws = Workspace::new();
    ws.declare(vec![
        gen("w1", "1"),
        gen("w2", "1.41421356237309504880168872420969807"),
        gen("w3", "3.14159265358979323846264338327950288"),
    ])
    .unwrap();
    for (name, text) in [
        ("a", "e(w1) + 1/3"),
        ("b", "(2/7 - 5i)*e(1/2*w2 - w3)"),
        ("c", "a*b - e(-w1)"),
        ("d", "(e(w2) + e(w3))^3"),
        ("zero", "a - a"),
    ] {
        let p = ws.parse(text).unwrap();
        ws.define(name, p).unwrap();
    }
    ws.settings.grid = Some(24);
    ws.settings.tol = 1e-8;
    ws
}

#[test]
fn save_and_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ws.json");
    let ws = sample();
    ws.save(&path).unwrap();
    let back = Workspace::load(&path).unwrap();
    assert_eq!(back, ws);
    assert_eq!(back.polys().len(), 5);
    assert_eq!(back.table().len(), 3);
    // identical state serializes to identical bytes
    assert_eq!(back.to_json().unwrap(), std::fs::read_to_string(&path).unwrap());
}

#[test]
fn corrupt_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ws.json");
    let text = sample().to_json().unwrap();

    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    assert!(matches!(Workspace::load(&path), Err(Error::Workspace(_))));

    std::fs::write(&path, text.replace("\"version\": 1", "\"version\": 9")).unwrap();
    assert!(matches!(Workspace::load(&path), Err(Error::Workspace(m)) if m.contains("version")));

    std::fs::write(&path, text.replacen("\"re\": \"", "\"re\": \"x", 1)).unwrap();
    assert!(Workspace::load(&path).is_err());

    assert!(Workspace::load(&dir.path().join("missing.json")).is_err());
}
