/** Trial logging in the harness interchange schema: one CSV row per event
 * plus one summary row per trial, schema-versioned, timestamps monotone
 * within a trial. Exported files pass the host toolkit's `import` command. */

export const SCHEMA_VERSION = 1;

export const TRIAL_LOG_COLUMNS = [
  "schema_version", "participant", "technique", "distance_m", "trial", "task",
  "row_type", "event_t_s", "event_kind", "event_detail",
  "selection_time_s", "docking_time_s", "clicks", "scored_selections",
  "error_distance_m", "success",
] as const;

export interface TrialEvent {
  t: number;
  kind: string;
  detail: string;
}

export class TrialLog {
  readonly participant: number;
  readonly technique: string;
  readonly distanceM: number;
  readonly trial: number;
  readonly task: "selection" | "docking";
  readonly events: TrialEvent[] = [];
  selectionTimeS: number | null = null;
  dockingTimeS: number | null = null;
  clicks = 0;
  scoredSelections = 0;
  errorDistanceM: number | null = null;
  success = false;

  constructor(participant: number, technique: string, distanceM: number,
              trial: number, task: "selection" | "docking") {
    this.participant = participant;
    this.technique = technique;
    this.distanceM = distanceM;
    this.trial = trial;
    this.task = task;
  }

  addEvent(t: number, kind: string, detail = ""): void {
    const last = this.events[this.events.length - 1];
    if (last && t < last.t - 1e-12) {
      throw new Error(`non-monotone event timestamp ${t} after ${last.t}`);
    }
    this.events.push({ t, kind, detail });
  }
}

function csvField(value: string): string {
  return /[",\n]/.test(value) ? `"${value.replace(/"/g, '""')}"` : value;
}

const fmt = (v: number | null): string => (v === null ? "" : String(v));

/** Serialize trial logs to the interchange CSV (shared with the harness). */
export function toCsv(logs: TrialLog[]): string {
  const lines = [TRIAL_LOG_COLUMNS.join(",")];
  for (const log of logs) {
    const head = [String(SCHEMA_VERSION), String(log.participant), log.technique,
                  String(log.distanceM), String(log.trial), log.task];
    for (const e of log.events) {
      lines.push([...head, "event", String(e.t), e.kind, csvField(e.detail),
                  "", "", "", "", "", ""].join(","));
    }
    lines.push([...head, "summary", "", "", "",
                fmt(log.selectionTimeS), fmt(log.dockingTimeS),
                String(log.clicks), String(log.scoredSelections),
                fmt(log.errorDistanceM), log.success ? "1" : "0"].join(","));
  }
  return lines.join("\n") + "\n";
}

/** Trigger a browser download of the session CSV. */
export function downloadCsv(logs: TrialLog[], filename: string): void {
  const blob = new Blob([toCsv(logs)], { type: "text/csv" });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = filename;
  a.click();
  URL.revokeObjectURL(url);
}

function splitCsvLine(line: string): string[] {
  const fields: string[] = [];
  let field = "";
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"' && line[i + 1] === '"') { field += '"'; i++; }
      else if (ch === '"') quoted = false;
      else field += ch;
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      fields.push(field);
      field = "";
    } else {
      field += ch;
    }
  }
  fields.push(field);
  return fields;
}

/** Parse a previously exported session CSV back into trial logs (e.g. to
 * resume or merge sessions); validates the schema version per row. */
export function fromCsv(text: string): TrialLog[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0 || lines[0] !== TRIAL_LOG_COLUMNS.join(",")) {
    throw new Error("row 1: unexpected header");
  }
  const logs = new Map<string, TrialLog>();
  const order: TrialLog[] = [];
  lines.slice(1).forEach((line, i) => {
    const row = splitCsvLine(line);
    if (row.length !== TRIAL_LOG_COLUMNS.length) {
      throw new Error(`row ${i + 2}: expected ${TRIAL_LOG_COLUMNS.length} columns`);
    }
    const rec = Object.fromEntries(TRIAL_LOG_COLUMNS.map((c, j) => [c, row[j]]));
    if (rec.schema_version !== String(SCHEMA_VERSION)) {
      throw new Error(`row ${i + 2}: schema_version ${rec.schema_version}`);
    }
    const key = [rec.participant, rec.technique, rec.distance_m, rec.trial,
                 rec.task].join("|");
    let log = logs.get(key);
    if (!log) {
      log = new TrialLog(Number(rec.participant), rec.technique,
                         Number(rec.distance_m), Number(rec.trial),
                         rec.task as "selection" | "docking");
      logs.set(key, log);
      order.push(log);
    }
    if (rec.row_type === "event") {
      log.addEvent(Number(rec.event_t_s), rec.event_kind, rec.event_detail);
    } else if (rec.row_type === "summary") {
      log.selectionTimeS = rec.selection_time_s ? Number(rec.selection_time_s) : null;
      log.dockingTimeS = rec.docking_time_s ? Number(rec.docking_time_s) : null;
      log.clicks = Number(rec.clicks || 0);
      log.scoredSelections = Number(rec.scored_selections || 0);
      log.errorDistanceM = rec.error_distance_m ? Number(rec.error_distance_m) : null;
      log.success = rec.success === "1";
    } else {
      throw new Error(`row ${i + 2}: unknown row_type ${rec.row_type}`);
    }
  });
  return order;
}
