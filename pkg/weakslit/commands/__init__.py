"""
Command package: one module per subcommand, assembled into a single parser.
"""
from weakslit.commands import kernel, qm, scan, trajectory
from weakslit.commands.base import CommandParser
from weakslit.core.config import settings


def build_parser() -> CommandParser:
    parser = CommandParser(
        prog=settings.PROJECT_NAME,
        description="Weak-value double-slit trajectories of option prices",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    trajectory.register(subparsers)
    kernel.register(subparsers)
    scan.register(subparsers)
    qm.register(subparsers)
    return parser


__all__ = ["build_parser", "CommandParser"]
