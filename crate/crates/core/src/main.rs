use graded_brauer::cli;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (code, out) = cli::run(&args);
    print!("{}", out);
    std::process::exit(code);
}
