"""Audit history in a sqlite file."""

import datetime
import json
import logging

from peewee import (
    BooleanField,
    CharField,
    DateTimeField,
    FloatField,
    ForeignKeyField,
    IntegerField,
    Model,
    SqliteDatabase,
    TextField,
)

from idlab.config import history_db

db = SqliteDatabase(None)


class BaseModel(Model):
    class Meta:
        database = db


class AuditRun(BaseModel):
    created_at = DateTimeField(default=datetime.datetime.now)
    version = CharField()
    config = TextField()
    verified = IntegerField(default=0)
    defect = IntegerField(default=0)
    error = IntegerField(default=0)
    recorded = IntegerField(default=0)
    known = IntegerField(default=0)
    exit_code = IntegerField()

    class Meta:
        table_name = 'audit_runs'

    def __repr__(self):
        return f'<AuditRun id={self.id} verified={self.verified} defect={self.defect} error={self.error}>'


class CheckRecord(BaseModel):
    run = ForeignKeyField(AuditRun, backref='checks', on_delete='CASCADE')
    name = CharField()
    params = TextField()
    status = CharField()
    residual = TextField()
    error_estimate = FloatField(null=True)
    known = BooleanField(default=False)

    class Meta:
        table_name = 'check_records'


def connect(path=None):
    """Bind the models to `path` (or the configured default) and create the tables."""
    path = str(path or history_db())
    if db.database != path or db.is_closed():
        if not db.is_closed():
            db.close()
        db.init(path, pragmas={'foreign_keys': 1})
        db.connect()
        db.create_tables([AuditRun, CheckRecord])
        logging.debug("Opened audit history at %s", path)
    return db


def record_report(report, path=None, expect_known=False) -> AuditRun:
    """Store a finished report and its entries; returns the new run row."""
    connect(path)
    summary = report.summary
    with db.atomic():
        run = AuditRun.create(
            version=report.version,
            config=json.dumps(report.config, sort_keys=True),
            verified=summary['verified'],
            defect=summary['defect'],
            error=summary['error'],
            recorded=summary['recorded'],
            known=summary['known'],
            exit_code=report.exit_code(expect_known),
        )
        rows = [{
            'run': run,
            'name': entry.check,
            'params': entry.params_text,
            'status': entry.status,
            'residual': entry.error if entry.error is not None else entry.residual,
            'error_estimate': entry.error_estimate,
            'known': entry.known,
        } for entry in report.checks]
        if rows:
            CheckRecord.insert_many(rows).execute()
    logging.info("Recorded audit run %d with %d checks", run.id, len(report.checks))
    return run


def recent_runs(path=None, limit=10) -> list[AuditRun]:
    connect(path)
    return list(AuditRun.select().order_by(AuditRun.id.desc()).limit(limit))
