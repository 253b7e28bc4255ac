from .export import read_field_csv, write_distance_field, write_field_csv, write_json, write_ridge_field, write_solution
from .file_validation import ValidationResult, format_validation_message, validate_output_dir, validate_problem_path
from .problem_file import ProblemConfig, apply_overrides, build_problem, dump_problem, load_problem, parse_problem

__all__ = [
    "ProblemConfig",
    "ValidationResult",
    "apply_overrides",
    "build_problem",
    "dump_problem",
    "format_validation_message",
    "load_problem",
    "parse_problem",
    "read_field_csv",
    "validate_output_dir",
    "validate_problem_path",
    "write_distance_field",
    "write_field_csv",
    "write_json",
    "write_ridge_field",
    "write_solution",
]
