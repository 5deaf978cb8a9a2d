/** Presentation of the agreement report.
 *
 * The grid shows the API's kappa values verbatim — formatting only, never
 * recomputation: the analysis module is the single source of numerical
 * truth.
 */

import type { AgreementReport, SchemaInfo } from "./model.js";

export function formatKappa(value: number | null): string {
  return value === null ? "—" : value.toFixed(2);
}

export interface AgreementRow {
  label: string;
  value: number | null;
  display: string;
}

export function agreementRows(report: AgreementReport, schema: SchemaInfo): AgreementRow[] {
  const rows: AgreementRow[] = [
    {
      label: "Sentence classification",
      value: report.sentence_classification,
      display: formatKappa(report.sentence_classification),
    },
    {
      label: "Action terms (all)",
      value: report.action_terms,
      display: formatKappa(report.action_terms),
    },
  ];
  for (const term of schema.terms) {
    const value = report.per_term[term.name] ?? null;
    rows.push({ label: term.name, value, display: formatKappa(value) });
  }
  return rows;
}
