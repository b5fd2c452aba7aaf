from opskit.cli import main_exit

main_exit()
