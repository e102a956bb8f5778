use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn program(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("programs").join(name)
}

fn seqc(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_seqc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    {
        let mut input = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            input.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_with_two_events_succeeds() {
    let (bmw, evs) = (program("bmw.seqc"), program("two_esc.evt"));
    let o = seqc(&["run", path(&bmw), "--events", path(&evs)], None);
    assert_eq!(stdout(&o), "$32,000\n$54,000\n$82,200\n");
    assert!(stderr(&o).contains("verdict: Succeeded"));
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn run_without_events_waits() {
    let (bmw, evs) = (program("bmw.seqc"), program("empty.evt"));
    let o = seqc(&["run", path(&bmw), "--events", path(&evs)], None);
    assert_eq!(stdout(&o), "$32,000\n");
    assert!(stderr(&o).contains("verdict: StableWaiting"));
    assert_eq!(o.status.code(), Some(2));
    let o = seqc(&["run", path(&bmw)], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn interactive_run_reads_events_from_stdin() {
    let bmw = program("bmw.seqc");
    let o = seqc(&["run", path(&bmw), "--interactive"], Some("esc 0\n\n"));
    assert_eq!(stdout(&o), "$32,000\n$54,000\n$82,200\n");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn trace_lines_go_to_stderr() {
    let (bmw, evs) = (program("bmw.seqc"), program("two_esc.evt"));
    let o = seqc(&["run", path(&bmw), "--events", path(&evs), "--trace"], None);
    let err = stderr(&o);
    assert!(err.contains("MOVE 1: rule=advance goal-path=0.1.0 theta=price:=str:$32,000"), "{err}");
    assert_eq!(err.lines().filter(|l| l.starts_with("MOVE ")).count(), 8);
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn countdown_runs_to_completion() {
    let o = seqc(&["run", path(&program("countdown.seqc"))], None);
    assert_eq!(stdout(&o), "3\n2\n1\n0\n");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn check_reports_initial_status() {
    let o = seqc(&["check", path(&program("bmw.seqc"))], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("status: MachineMove (0)"));
}

#[test]
fn fmt_is_idempotent() {
    for name in ["bmw.seqc", "earphone.seqc", "countdown.seqc"] {
        let first = stdout(&seqc(&["fmt", path(&program(name))], None));
        let dir = std::env::temp_dir().join(format!("seqc-fmt-{}-{name}", std::process::id()));
        std::fs::write(&dir, &first).unwrap();
        let second = stdout(&seqc(&["fmt", dir.to_str().unwrap()], None));
        std::fs::remove_file(&dir).ok();
        assert_eq!(first, second, "{name}");
    }
}

#[test]
fn fmt_lists_addresses() {
    let o = seqc(&["fmt", path(&program("bmw.seqc")), "--addresses"], None);
    let out = stdout(&o);
    assert!(out.starts_with("0\t[3 remaining]\t"), "{out}");
}

#[test]
fn parse_errors_exit_with_usage_code() {
    let bad = std::env::temp_dir().join(format!("seqc-bad-{}.seqc", std::process::id()));
    std::fs::write(&bad, "decls { choice() } goal { skip }").unwrap();
    let o = seqc(&["run", bad.to_str().unwrap()], None);
    std::fs::remove_file(&bad).ok();
    assert_eq!(o.status.code(), Some(3));
    assert!(!stderr(&o).is_empty());
    assert_eq!(seqc(&["run"], None).status.code(), Some(3));
    assert_eq!(seqc(&["bogus"], None).status.code(), Some(3));
}

#[test]
fn serve_replays_identically() {
    let bmw = program("bmw.seqc");
    let script = "{\"event\":\"0\"}\nnot json\n{\"event\":\"9\"}\n{\"event\":\"0\"}\n{\"reset\":true}\n";
    let a = seqc(&["serve", path(&bmw)], Some(script));
    let b = seqc(&["serve", path(&bmw)], Some(script));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.iter().all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
    let outputs: Vec<&str> = lines.iter().copied().filter(|l| l.starts_with("{\"output\"")).collect();
    assert_eq!(
        outputs,
        [
            r#"{"output":"$32,000"}"#,
            r#"{"output":"$54,000"}"#,
            r#"{"output":"$82,200"}"#,
            r#"{"output":"$32,000"}"#,
        ]
    );
    assert!(lines.contains(&r#"{"verdict":"Succeeded"}"#));
    assert_eq!(lines.iter().filter(|l| l.contains("\"bad_json\"")).count(), 1);
    assert_eq!(lines.iter().filter(|l| l.contains("\"bad_path\"")).count(), 1);
    assert!(lines.last().unwrap().contains(r#""status":"UserMove""#));
}

#[test]
fn serve_over_tcp() {
    use std::io::{BufRead, BufReader};
    use std::net::TcpStream;

    let bmw = program("bmw.seqc");
    let mut child = Command::new(env!("CARGO_BIN_EXE_seqc"))
        .args(["serve", path(&bmw), "--listen", "127.0.0.1:0"])
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut err = BufReader::new(child.stderr.take().unwrap());
    let mut banner = String::new();
    err.read_line(&mut banner).unwrap();
    let addr = banner.trim().rsplit(' ').next().unwrap().to_string();
    let mut stream = TcpStream::connect(&addr).unwrap();
    stream.write_all(b"{\"event\":\"0\"}\n{\"event\":\"0\"}\n").unwrap();
    stream.shutdown(std::net::Shutdown::Write).unwrap();
    let lines: Vec<String> = BufReader::new(stream).lines().map(Result::unwrap).collect();
    assert!(child.wait().unwrap().success());
    assert_eq!(lines.iter().filter(|l| l.starts_with("{\"output\"")).count(), 3);
    assert_eq!(lines.last().unwrap(), r#"{"verdict":"Succeeded"}"#);
}
