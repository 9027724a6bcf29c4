from pathlib import PurePosixPath

from django.core.exceptions import ValidationError


def normalize_relative_path(path):
    """Posix form of a project-relative path; rejects absolute paths and '..' escapes"""
    if not path:
        raise ValidationError("File path is required")

    posix = PurePosixPath(str(path).replace('\\', '/'))
    if posix.is_absolute() or '..' in posix.parts:
        raise ValidationError(f"Path {path} is outside the project")

    return posix.as_posix()


def validate_overlay(project, overlay):
    """Validate that every overlay file belongs to the project"""
    if not overlay:
        return {}

    known = set(project.files())
    normalized = {}
    for path, text in overlay.items():
        relative = normalize_relative_path(path)
        if relative not in known:
            raise ValidationError(f"Overlay file {path} does not belong to project {project.name}")
        normalized[relative] = text

    return normalized


def validate_budget(n, r):
    """Validate N-Solutions and Retries"""
    errors = {}
    if n is None or n < 1:
        errors['n'] = "N-Solutions must be a positive integer"
    if r is None or r < 0:
        errors['r'] = "Retries must be a non-negative integer"

    if errors:
        raise ValidationError(errors)

    return True


def validate_temperature(temperature):
    if temperature is None or temperature < 0:
        raise ValidationError("Temperature must be a non-negative number")
    return temperature

