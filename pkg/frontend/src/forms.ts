// Form-model generation: the intake forms are derived entirely from the
// knowledge base served by GET /kb, never hardcoded, so any knowledge base
// works unmodified.

import type { KbDocument, ProfileSubsets } from './types.js'

export type FieldKind = 'toggle' | 'checkbox' | 'slider' | 'text' | 'number'

export interface FormField {
    kind: FieldKind
    id: string
    label: string
    /** grouping hint: profile subset name or observable/aspect container */
    group?: string
}

export interface FormSection {
    kind: 'history' | 'recall' | 'problem' | 'sign' | 'test'
    id: string
    title: string
    fields: FormField[]
    /** non-empty profile subsets, in canonical order (empty ones are hidden) */
    groups?: string[]
}

const PROFILE_ORDER: (keyof ProfileSubsets)[] = [
    'location',
    'longevity',
    'continuity',
    'intermittency',
    'severity',
]

export const PROFILE_TITLES: Record<string, string> = {
    location: 'Location',
    longevity: 'Longevity',
    continuity: 'Continuity',
    intermittency: 'Intermittency',
    severity: 'Severity specifics',
}

function labelOf(decl: { id: string; label?: string }): string {
    return decl.label ?? decl.id.replace(/_/g, ' ')
}

export function intakeSections(kb: KbDocument): FormSection[] {
    const sections: FormSection[] = []

    sections.push({
        kind: 'history',
        id: 'history',
        title: 'Past history',
        fields: kb.history_aspects.map((aspect) => ({
            kind: 'toggle',
            id: aspect.id,
            label: labelOf(aspect),
        })),
    })

    for (const aspect of kb.history_aspects) {
        if (!aspect.undiagnosed) continue
        const universe = kb.past_symptoms[aspect.id]?.symptoms ?? {}
        sections.push({
            kind: 'recall',
            id: aspect.id,
            title: `Recalled symptoms: ${labelOf(aspect)}`,
            fields: Object.keys(universe).map((symptom) => ({
                kind: 'checkbox',
                id: symptom,
                label: symptom.replace(/_/g, ' '),
            })),
        })
    }

    for (const problem of kb.problems) {
        const fields: FormField[] = []
        const groups: string[] = []
        for (const subset of PROFILE_ORDER) {
            const factors = problem.profile[subset] ?? []
            if (factors.length === 0) continue // empty subset: section hidden
            groups.push(subset)
            for (const factor of factors) {
                fields.push({
                    kind: subset === 'severity' ? 'slider' : 'text',
                    id: factor,
                    label: factor.replace(/_/g, ' '),
                    group: subset,
                })
            }
        }
        sections.push({
            kind: 'problem',
            id: problem.id,
            title: labelOf(problem),
            fields,
            groups,
        })
    }

    for (const sign of kb.signs) {
        const observables = kb.observables[sign.id] ?? []
        sections.push({
            kind: 'sign',
            id: sign.id,
            title: labelOf(sign),
            fields: observables.map((obs) => ({
                kind: obs.graded ? 'slider' : 'text',
                id: obs.id,
                label: obs.id.replace(/_/g, ' '),
            })),
        })
    }

    for (const test of kb.tests) {
        const fields: FormField[] = test.aspects
            ? test.aspects.map((aspect) => ({
                  kind: 'number' as const,
                  id: aspect.id,
                  label: aspect.id.replace(/_/g, ' '),
                  group: 'aspects',
              }))
            : [{ kind: 'number' as const, id: test.id, label: 'result value' }]
        sections.push({
            kind: 'test',
            id: test.id,
            title: labelOf(test),
            fields,
        })
    }

    return sections
}

/** Free-text profile cells: numeric strings travel as numbers so rules that
 * match numeric factor values keep working. */
export function parseCellValue(raw: string): string | number {
    const trimmed = raw.trim()
    if (trimmed !== '' && Number.isFinite(Number(trimmed))) {
        return Number(trimmed)
    }
    return trimmed
}
