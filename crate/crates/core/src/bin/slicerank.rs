use slicerank::cli;
use slicerank::Budget;

fn main() {
    let (out, code) = cli::run(std::env::args_os(), Budget::from_env());
    println!("{out}");
    if code != cli::EXIT_OK {
        let msg = serde_json::from_str::<serde_json::Value>(&out)
            .ok()
            .and_then(|v| v["error"]["message"].as_str().map(str::to_owned));
        match msg {
            Some(msg) => eprintln!("slicerank: {msg}"),
            None if code == cli::EXIT_INVALID => eprintln!("slicerank: system is not ordered sum-free"),
            None => {}
        }
    }
    std::process::exit(code);
}
