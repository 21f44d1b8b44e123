use std::process::Command;

fn xderiv(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_xderiv")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn exit_codes_reach_the_shell() {
    assert_eq!(xderiv(&["match", "-e", "shclose(ab)", "-w", "abab"]), (0, "accept\n".into(), String::new()));
    assert_eq!(xderiv(&["equiv", "-e", "a*", "-f", "a*a"]).0, 1);
    let (code, stdout, stderr) = xderiv(&["compile", "-e", "shclose(ab)"]);
    assert_eq!((code, stdout.as_str()), (3, ""));
    assert!(stderr.contains("shclose"));
    assert_eq!(xderiv(&["enum", "-e", "a("]).0, 2);
}
