// DOM rendering. Numbers are formatted, never derived: every grade shown
// comes verbatim from an engine response.

import { PROFILE_TITLES, type FormSection } from './forms.js'
import type { KbDocument, MatricesDoc } from './types.js'

export function formatGrade(grade: number): string {
    return grade.toFixed(2)
}

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className?: string,
    text?: string,
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag)
    if (className) node.className = className
    if (text !== undefined) node.textContent = text
    return node
}

function labelFor(kb: KbDocument, list: 'symptoms' | 'signs' | 'tests' | 'history_aspects', id: string): string {
    const decl = (kb[list] as { id: string; label?: string }[]).find((d) => d.id === id)
    return decl?.label ?? id
}

function binaryBadge(present: boolean): HTMLElement {
    const badge = el('span', present ? 'badge present' : 'badge absent')
    badge.textContent = present ? 'present' : 'absent'
    return badge
}

function gradeCell(grade: number): HTMLElement {
    const cell = el('span', 'grade-cell')
    const bar = el('span', 'grade-bar')
    bar.style.width = `${Number(formatGrade(grade)) * 100}%` // display scaling only
    const value = el('span', 'grade-value mono', formatGrade(grade))
    cell.append(bar, value)
    return cell
}

/** The four matrices, committed revision's view. */
export function renderMatrices(kb: KbDocument, matrices: MatricesDoc): HTMLElement {
    const root = el('div', 'matrices')

    const history = el('section', 'matrix history')
    history.append(el('h3', undefined, 'History (H)'))
    const historyList = el('ul')
    matrices.history.aspects.forEach((aspect, i) => {
        const item = el('li')
        item.dataset.aspect = aspect
        if (i < matrices.history.split) item.classList.add('inferable')
        item.append(
            el('span', 'row-label', labelFor(kb, 'history_aspects', aspect)),
            binaryBadge(matrices.history.entries[i] === 1),
        )
        historyList.append(item)
    })
    history.append(historyList)

    const symptoms = el('section', 'matrix symptoms')
    symptoms.append(el('h3', undefined, 'Symptoms (A)'))
    const symptomList = el('ul')
    matrices.symptoms.ids.forEach((id, i) => {
        const item = el('li')
        item.dataset.symptom = id
        const grade = matrices.symptoms.grades[i]
        const binary = kb.symptoms.find((s) => s.id === id)?.binary ?? false
        item.append(el('span', 'row-label', labelFor(kb, 'symptoms', id)))
        item.append(binary ? binaryBadge(grade === 1) : gradeCell(grade))
        symptomList.append(item)
    })
    symptoms.append(symptomList)

    const signs = el('section', 'matrix signs')
    signs.append(el('h3', undefined, 'Signs (S)'))
    const signList = el('ul')
    matrices.signs.ids.forEach((id, i) => {
        const item = el('li')
        item.dataset.sign = id
        const grade = matrices.signs.grades[i]
        const binary = kb.signs.find((s) => s.id === id)?.binary ?? false
        item.append(el('span', 'row-label', labelFor(kb, 'signs', id)))
        item.append(binary ? binaryBadge(grade === 1) : gradeCell(grade))
        signList.append(item)
    })
    signs.append(signList)

    const tests = el('section', 'matrix tests')
    tests.append(el('h3', undefined, 'Tests (Z)'))
    const testList = el('ul')
    for (const id of matrices.tests.declared) {
        const item = el('li')
        item.dataset.test = id
        item.append(el('span', 'row-label', labelFor(kb, 'tests', id)))
        const grade = matrices.tests.grades[id]
        if (grade === undefined) {
            item.append(el('span', 'badge unperformed', 'not performed'))
        } else {
            item.append(gradeCell(grade))
        }
        testList.append(item)
    }
    tests.append(testList)

    const unanswered = el('section', 'matrix unanswered')
    unanswered.append(el('h3', undefined, 'Unanswered'))
    const pairs: [string, string[]][] = [
        ['history aspects', matrices.unanswered.history_aspects],
        ['problems', matrices.unanswered.problems],
        ['signs', matrices.unanswered.signs],
        ['tests', matrices.unanswered.tests],
    ]
    const unansweredList = el('ul')
    for (const [name, items] of pairs) {
        unansweredList.append(el('li', undefined, `${name}: ${items.length ? items.join(', ') : 'none'}`))
    }
    unanswered.append(unansweredList)

    root.append(history, symptoms, signs, tests, unanswered)
    return root
}

export interface FieldHandlers {
    onToggle(aspect: string, value: 0 | 1): void
    onRecallChange(disease: string, symptoms: string[]): void
    onProblemFactor(problem: string, factor: string, raw: string): void
    onObservation(sign: string, observable: string, raw: string): void
    onScalarTest(test: string, value: number): void
    onAspectTest(test: string, aspects: Record<string, number>): void
}

/** Build the intake forms from the generated section model. */
export function renderForms(sections: FormSection[], handlers: FieldHandlers): HTMLElement {
    const root = el('div', 'intake-forms')
    for (const section of sections) {
        const panel = el('section', `panel ${section.kind}`)
        panel.dataset.panel = `${section.kind}:${section.id}`
        panel.append(el('h3', undefined, section.title))

        if (section.kind === 'history') {
            const list = el('ul')
            for (const field of section.fields) {
                const item = el('li')
                item.dataset.field = field.id
                item.append(el('span', 'row-label', field.label))
                for (const value of [1, 0] as const) {
                    const button = el('button', 'toggle', value ? 'yes' : 'no')
                    button.addEventListener('click', () => handlers.onToggle(field.id, value))
                    item.append(button)
                }
                list.append(item)
            }
            panel.append(list)
        } else if (section.kind === 'recall') {
            const checked = new Set<string>()
            const list = el('ul')
            for (const field of section.fields) {
                const item = el('li')
                const box = el('input') as HTMLInputElement
                box.type = 'checkbox'
                box.dataset.symptom = field.id
                box.addEventListener('change', () => {
                    if (box.checked) checked.add(field.id)
                    else checked.delete(field.id)
                    handlers.onRecallChange(section.id, [...checked].sort())
                })
                const label = el('label', undefined, ` ${field.label}`)
                label.prepend(box)
                item.append(label)
                list.append(item)
            }
            panel.append(list)
        } else if (section.kind === 'problem' || section.kind === 'sign') {
            const groups = section.groups ?? [undefined as unknown as string]
            for (const group of section.kind === 'problem' ? groups : ['']) {
                const wrap = el('div', 'group')
                if (group && section.kind === 'problem') {
                    wrap.append(el('h4', undefined, PROFILE_TITLES[group] ?? group))
                    wrap.dataset.group = group
                }
                const fields = section.fields.filter((f) =>
                    section.kind === 'problem' ? f.group === group : true,
                )
                for (const field of fields) {
                    const row = el('label', 'field-row')
                    row.dataset.field = field.id
                    row.append(el('span', 'row-label', field.label))
                    const input = el('input') as HTMLInputElement
                    if (field.kind === 'slider') {
                        input.type = 'range'
                        input.min = '0'
                        input.max = '1'
                        input.step = '0.01'
                        input.value = '0'
                        const shown = el('span', 'mono', '0.00')
                        input.addEventListener('input', () => {
                            shown.textContent = Number(input.value).toFixed(2)
                        })
                        input.addEventListener('change', () => {
                            if (section.kind === 'problem') {
                                handlers.onProblemFactor(section.id, field.id, input.value)
                            } else {
                                handlers.onObservation(section.id, field.id, input.value)
                            }
                        })
                        row.append(input, shown)
                    } else {
                        input.type = 'text'
                        input.addEventListener('change', () => {
                            if (section.kind === 'problem') {
                                handlers.onProblemFactor(section.id, field.id, input.value)
                            } else {
                                handlers.onObservation(section.id, field.id, input.value)
                            }
                        })
                        row.append(input)
                    }
                    wrap.append(row)
                }
                if (wrap.childElementCount > 0) panel.append(wrap)
            }
        } else {
            // test panel: scalar input submits on change; aspect inputs submit
            // together once every declared aspect has a value
            const values = new Map<string, number>()
            const aspectCount = section.fields.filter((f) => f.group === 'aspects').length
            for (const field of section.fields) {
                const row = el('label', 'field-row')
                row.dataset.field = field.id
                row.append(el('span', 'row-label', field.label))
                const input = el('input') as HTMLInputElement
                input.type = 'number'
                input.addEventListener('change', () => {
                    const value = Number(input.value)
                    if (!Number.isFinite(value)) return
                    if (field.group !== 'aspects') {
                        handlers.onScalarTest(section.id, value)
                        return
                    }
                    values.set(field.id, value)
                    if (values.size === aspectCount) {
                        handlers.onAspectTest(section.id, Object.fromEntries(values))
                    }
                })
                row.append(input)
                panel.append(row)
            }
        }
        root.append(panel)
    }
    return root
}

export interface AlphaSliderHooks {
    onPreview(alpha: number): void
    onCommit(alpha: number): void
}

/** The what-if slider: moving it previews, nothing commits until Apply. */
export function renderAlphaSlider(initial: number, hooks: AlphaSliderHooks): HTMLElement {
    const wrap = el('section', 'panel alpha-whatif')
    wrap.append(el('h3', undefined, 'Prominence threshold (what-if)'))
    const row = el('label', 'field-row')
    row.append(el('span', 'row-label', 'alpha'))
    const slider = el('input') as HTMLInputElement
    slider.type = 'range'
    slider.min = '0'
    slider.max = '1'
    slider.step = '0.05'
    slider.value = String(initial)
    const shown = el('span', 'mono', initial.toFixed(2))
    slider.addEventListener('input', () => {
        shown.textContent = Number(slider.value).toFixed(2)
        hooks.onPreview(Number(slider.value))
    })
    const apply = el('button', 'apply', 'Apply')
    apply.addEventListener('click', () => hooks.onCommit(Number(slider.value)))
    row.append(slider, shown, apply)
    wrap.append(row)
    return wrap
}

/** Prominent-set listing used by the preview panel and the summary. */
export function renderProminent(prominent: Record<string, string[]>): HTMLElement {
    const wrap = el('div', 'prominent')
    const list = el('ul')
    for (const [disease, symptoms] of Object.entries(prominent)) {
        const item = el('li')
        item.dataset.disease = disease
        item.textContent = `${disease}: ${symptoms.length ? symptoms.join(', ') : '(none)'}`
        list.append(item)
    }
    wrap.append(list)
    return wrap
}
