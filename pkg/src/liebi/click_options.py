"""Groups of Click options for the liebi command line interface."""

import functools

import rich_click as click

# Named option groups to separate runtime options from command specific ones.
click.rich_click.OPTION_GROUPS = {
    "liebi": [
        {
            "name": "Runtime options",
            "options": [
                "--debug",
                "--max-n",
            ],
        },
    ],
    "liebi atiyah": [
        {
            "name": "Computation options",
            "options": [
                "--c1-only",
            ],
        },
        {
            "name": "Output options",
            "options": [
                "--json",
            ],
        },
    ],
}


def runtime_click_options(function):
    """Wrap `function` with the Click options overriding the runtime environment."""
    # NOTE: Keep in sync with OPTION_GROUPS.

    @click.option(
        "--debug",
        is_flag=True,
        help="If set, log intermediate system sizes and ranks to stderr (same as "
        "LIEBI_DEBUG_MODE=true).",
    )
    @click.option(
        "--max-n",
        type=click.IntRange(min=2),
        default=None,
        metavar="N",
        help="Largest n for which sl(n) catalog entries are available (defaults to "
        "LIEBI_MAX_N or 4). Exact elimination gets expensive quickly beyond 4.",
    )
    @functools.wraps(function)
    def wrapper_runtime_options(*args, **kwargs):
        return function(*args, **kwargs)

    return wrapper_runtime_options


def report_click_options(function):
    """Wrap `function` with the Click options controlling an Atiyah report."""
    # NOTE: Keep in sync with OPTION_GROUPS.

    @click.option(
        "--c1-only",
        is_flag=True,
        help="If set, only decide the first scalar Atiyah class. The Atiyah class "
        "itself is reported as unknown.",
    )
    @click.option(
        "--json",
        "as_json",
        is_flag=True,
        help="If set, print the JSON report document instead of a summary.",
    )
    @functools.wraps(function)
    def wrapper_report_options(*args, **kwargs):
        return function(*args, **kwargs)

    return wrapper_report_options
