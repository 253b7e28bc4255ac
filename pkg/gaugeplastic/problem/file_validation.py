import os
from pathlib import Path
from typing import List, Optional

import chardet

# Problem files are small plain-text documents
PROBLEM_EXTENSIONS = (".toml", ".prob")
MAX_PROBLEM_FILE_SIZE = 256 * 1024  # 256KB
SNIFF_BYTES = 8192
MIN_CONFIDENCE = 0.7


class ValidationResult:
    """Errors and warnings gathered while checking a problem file or a built problem."""

    def __init__(self, is_valid: bool = True, warnings: Optional[List[str]] = None, errors: Optional[List[str]] = None):
        self.is_valid = is_valid
        self.warnings = list(warnings or [])
        self.errors = list(errors or [])
        if self.errors:
            self.is_valid = False

    def add_warning(self, message: str):
        self.warnings.append(message)

    def add_error(self, message: str):
        self.errors.append(message)
        self.is_valid = False


def _head(file_path: str) -> bytes:
    with open(file_path, "rb") as f:
        return f.read(SNIFF_BYTES)


def _looks_like_text(chunk: bytes) -> bool:
    if not chunk:
        return True
    if b"\x00" in chunk:
        return False
    if chardet.detect(chunk)["confidence"] > MIN_CONFIDENCE:
        return True
    printable = sum(1 for byte in chunk if 32 <= byte <= 126 or byte in (9, 10, 13))
    return printable / len(chunk) > MIN_CONFIDENCE


def is_text_file(file_path: str) -> bool:
    """
    Decide from the first bytes whether a file holds text.

    Args:
        file_path: Path to the file

    Returns:
        False for unreadable files, NUL bytes or mostly unprintable content
    """
    try:
        return _looks_like_text(_head(file_path))
    except OSError:
        return False


def detect_encoding(file_path: str) -> Optional[str]:
    """Encoding guessed from the first bytes, or None when the guess is unreliable."""
    chunk = _head(file_path)
    if not chunk:
        return "utf-8"
    guess = chardet.detect(chunk)
    if guess["encoding"] and guess["confidence"] > MIN_CONFIDENCE:
        return guess["encoding"]
    return None


def validate_file_size(file_path: str) -> List[str]:
    try:
        size = os.path.getsize(file_path)
    except OSError as e:
        return [f"Could not check file size: {e}"]
    if size > MAX_PROBLEM_FILE_SIZE:
        return [f"File size ({size / 1024:.1f}KB) exceeds the problem file limit ({MAX_PROBLEM_FILE_SIZE // 1024}KB)"]
    return []


def validate_problem_path(file_path: str) -> ValidationResult:
    """
    Check that a path names a readable, reasonably sized text file.

    Args:
        file_path: Path to the problem file

    Returns:
        ValidationResult with validation details
    """
    result = ValidationResult()
    path = Path(file_path)

    if not path.exists():
        result.add_error(f"File does not exist: {file_path}")
        return result

    if not path.is_file():
        result.add_error(f"Path is not a file: {file_path}")
        return result

    if not os.access(file_path, os.R_OK):
        result.add_error("File is not readable")
        return result

    if path.suffix.lower() not in PROBLEM_EXTENSIONS:
        result.add_warning(f"Unexpected extension '{path.suffix}'; problem files are TOML")

    for error in validate_file_size(file_path):
        result.add_error(error)

    if not is_text_file(file_path):
        result.add_error("File appears to be binary")

    return result


def validate_output_dir(directory: str) -> ValidationResult:
    """The output directory must exist or be creatable, and be writable."""
    result = ValidationResult()
    path = Path(directory)
    if path.exists() and not path.is_dir():
        result.add_error(f"Output path is not a directory: {directory}")
        return result
    existing = path
    while not existing.exists():
        existing = existing.parent
    if not os.access(existing, os.W_OK):
        result.add_error(f"Output directory is not writable: {directory}")
    return result


def format_validation_message(result: ValidationResult) -> str:
    """
    Format validation result into a user-friendly message.

    Args:
        result: ValidationResult to format

    Returns:
        Formatted message string
    """
    if not result.is_valid:
        message = "❌ Problem validation failed:\n"
        for error in result.errors:
            message += f"  • {error}\n"
    else:
        message = "✅ Problem validation passed\n"

    if result.warnings:
        message += "⚠️ Warnings:\n"
        for warning in result.warnings:
            message += f"  • {warning}\n"

    return message.strip()
