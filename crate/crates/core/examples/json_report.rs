//! Drives the command surface in-process and reads the JSON back.

use schroder::cli::run;

fn main() {
    let out = run(["schroder", "detect", "--map", "4*z-4*z^2", "--json"]);
    println!("exit code {}", out.exit_code);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).expect("valid JSON");
    println!("outcome {}", v["outcome"]);
    println!("tau side {}", v["equation_tau"]);

    let bell = run(["schroder", "bell", "--n", "5", "--k", "2"]);
    print!("{}", bell.stdout);
}
