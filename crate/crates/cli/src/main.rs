use std::io::IsTerminal;
use std::process::ExitCode;

fn main() -> ExitCode {
    let setting = std::env::var("SLT_COLOR").ok();
    let color = slt_cli::color_enabled(setting.as_deref(), std::io::stderr().is_terminal());
    ExitCode::from(slt_cli::run_stdio(std::env::args_os(), color).code())
}
