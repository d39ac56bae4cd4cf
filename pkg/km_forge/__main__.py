from km_forge.cli import run

run()
