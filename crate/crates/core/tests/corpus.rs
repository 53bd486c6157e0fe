//! Every shipped problem file parses, and the oracles agree where they exist.

use std::path::PathBuf;

use gamma_aq::commands::{cmd_classical, cmd_pi0, cmd_piy, PiyArgs};
use gamma_aq::problem::parse_problem;
use gamma_aq::verify::Status;
use gamma_aq::Error;

fn files() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "problem"))
        .collect();
    v.sort();
    v
}

#[test]
fn corpus_files_agree_with_oracles() {
    let mut seen = 0;
    for path in files() {
        let name = path.file_stem().unwrap().to_str().unwrap().to_string();
        if name == "non-commutative" {
            assert!(matches!(parse_problem(&path), Err(Error::Validation(_))));
            continue;
        }
        let p = parse_problem(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
        let r = cmd_piy(&p, &PiyArgs::default(), None).unwrap();
        assert_eq!(r.status, Status::Pass, "{name}");
        if name.starts_with("gamma") {
            assert_eq!(r.result["report"]["dims"][1], 0, "{name}");
            continue;
        }
        seen += 1;
        let pi0 = cmd_pi0(&p, None).unwrap();
        assert_eq!(pi0.result["verdict"], "MATCH", "{name}");
        assert_eq!(r.result["classical"]["pi0_agrees"], true, "{name}");
        if !name.starts_with("square-zero") {
            assert_eq!(r.result["classical"]["pi1_agrees"], true, "{name}");
            let d1 = cmd_classical(&p, 1).unwrap();
            assert_eq!(d1.result["dim"], r.result["report"]["dims"][1], "{name}");
        }
    }
    assert_eq!(seen, 24);
}
