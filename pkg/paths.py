from os import curdir

WORK_DIR = f'{curdir}/'

TASKS_DIR_NAME = 'tasks'
TASKS_DIR = f'{WORK_DIR}{TASKS_DIR_NAME}/'

CONFIG_DIR_NAME = 'conf'
CONFIG_DIR = f'{WORK_DIR}{CONFIG_DIR_NAME}/'

OUT_DIR_NAME = 'out'
OUT_DIR = f'{WORK_DIR}{OUT_DIR_NAME}/'

LOGS_DIR_NAME = 'logs'
LOGS_DIR = f'{WORK_DIR}{LOGS_DIR_NAME}/'
RUN_LOG = f'{LOGS_DIR}run.log'
