DOIT_CONFIG = {
    "backend": "json",
    "default_tasks": ["check"],
    "dep_file": ".doit.json",
    "verbosity": 2,
}


def task_check():
    return {
        "actions": [
            "uv run ruff check src/gridrate tests",
            "uv run ruff format --check src/gridrate tests",
            "uv run ty check src/gridrate tests",
        ],
    }


def task_test():
    return {
        "actions": [
            "uv run pytest -m 'not slow'",
        ],
    }


def task_test_all():
    return {
        "actions": [
            "uv run pytest --cov=gridrate",
        ],
    }


def task_docs():
    return {
        "actions": [
            "uv run mkdocs build --strict",
        ],
    }
