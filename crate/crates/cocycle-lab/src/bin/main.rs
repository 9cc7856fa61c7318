use std::process::ExitCode;

fn main() -> ExitCode {
    // Die quietly when the consumer closes the pipe (`... | head`), like
    // every other line-oriented tool; the default Rust handler panics.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    ExitCode::from(cocycle_lab::cli::run())
}
