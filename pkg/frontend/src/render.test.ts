// @vitest-environment happy-dom
import { readFileSync } from 'node:fs'
import { resolve } from 'node:path'
import { describe, expect, it, vi } from 'vitest'

import { intakeSections } from './forms.js'
import {
    formatGrade,
    renderAlphaSlider,
    renderForms,
    renderMatrices,
    renderProminent,
    type FieldHandlers,
} from './render.js'
import type { KbDocument, MatricesDoc } from './types.js'

// vitest runs from frontend/; the engine fixtures live one level up
const kb = JSON.parse(
    readFileSync(resolve(process.cwd(), '../demo/demo.kb.json'), 'utf-8'),
) as KbDocument

const golden = JSON.parse(
    readFileSync(resolve(process.cwd(), '../tests/golden/demo_report.json'), 'utf-8'),
) as MatricesDoc

function noopHandlers(): FieldHandlers {
    return {
        onToggle: vi.fn(),
        onRecallChange: vi.fn(),
        onProblemFactor: vi.fn(),
        onObservation: vi.fn(),
        onScalarTest: vi.fn(),
        onAspectTest: vi.fn(),
    }
}

describe('renderMatrices', () => {
    const root = renderMatrices(kb, golden)

    it('shows binary symptoms as badges, graded ones as numbers', () => {
        const angina = root.querySelector('[data-symptom="angina"]')!
        expect(angina.querySelector('.badge')!.textContent).toBe('present')
        expect(angina.querySelector('.grade-value')).toBeNull()

        const chest = root.querySelector('[data-symptom="chest_pain_severity"]')!
        expect(chest.querySelector('.grade-value')!.textContent).toBe('0.70')
    })

    it('every displayed number is a formatted server grade, nothing derived', () => {
        const shown = [...root.querySelectorAll('.grade-value')].map((n) => n.textContent)
        const serverGrades = [
            ...golden.symptoms.grades,
            ...golden.signs.grades,
            ...Object.values(golden.tests.grades),
        ].map(formatGrade)
        for (const text of shown) {
            expect(serverGrades).toContain(text)
        }
    })

    it('marks unperformed tests as absent rather than zero', () => {
        const noResults: MatricesDoc = { ...golden, tests: { declared: golden.tests.declared, grades: {} } }
        const rerender = renderMatrices(kb, noResults)
        const marker = rerender.querySelector('[data-test="serum_marker"]')!
        expect(marker.textContent).toContain('not performed')
        expect(marker.textContent).not.toContain('0.00')
    })

    it('labels history rows and flags the inferable block', () => {
        const first = root.querySelector('[data-aspect="rheumatic_fever"]')!
        expect(first.classList.contains('inferable')).toBe(true)
        expect(first.querySelector('.badge')!.textContent).toBe('present')
        const last = root.querySelector('[data-aspect="family_heart_disease"]')!
        expect(last.classList.contains('inferable')).toBe(false)
        expect(last.querySelector('.badge')!.textContent).toBe('absent')
    })

    it('lists unanswered universes', () => {
        expect(root.querySelector('.unanswered')!.textContent).toContain('family_heart_disease')
        expect(root.querySelector('.unanswered')!.textContent).toContain('ankle_edema')
    })
})

describe('renderForms', () => {
    it('submits a whole-set recall finding when checkboxes change', () => {
        const handlers = noopHandlers()
        const root = renderForms(intakeSections(kb), handlers)
        const panel = root.querySelector('[data-panel="recall:rheumatic_fever"]')!
        const jointPain = panel.querySelector<HTMLInputElement>('input[data-symptom="joint_pain"]')!
        jointPain.checked = true
        jointPain.dispatchEvent(new Event('change'))
        expect(handlers.onRecallChange).toHaveBeenLastCalledWith('rheumatic_fever', ['joint_pain'])
        const fever = panel.querySelector<HTMLInputElement>('input[data-symptom="fever_episodes"]')!
        fever.checked = true
        fever.dispatchEvent(new Event('change'))
        expect(handlers.onRecallChange).toHaveBeenLastCalledWith('rheumatic_fever', [
            'fever_episodes',
            'joint_pain',
        ])
    })

    it('severity sliders are range inputs reporting on change', () => {
        const handlers = noopHandlers()
        const root = renderForms(intakeSections(kb), handlers)
        const chest = root.querySelector('[data-panel="problem:chest_pain"]')!
        const slider = chest.querySelector<HTMLInputElement>('[data-field="pain_grade"] input')!
        expect(slider.type).toBe('range')
        slider.value = '0.7'
        slider.dispatchEvent(new Event('change'))
        expect(handlers.onProblemFactor).toHaveBeenCalledWith('chest_pain', 'pain_grade', '0.7')
    })

    it('hides empty profile subsets', () => {
        const root = renderForms(intakeSections(kb), noopHandlers())
        const dizzy = root.querySelector('[data-panel="problem:dizziness"]')!
        const groups = [...dizzy.querySelectorAll('.group h4')].map((h) => h.textContent)
        expect(groups).toEqual(['Longevity', 'Severity specifics'])
    })

    it('aspect tests submit once all aspects are given', () => {
        const handlers = noopHandlers()
        const root = renderForms(intakeSections(kb), handlers)
        const bp = root.querySelector('[data-panel="test:blood_pressure"]')!
        const systolic = bp.querySelector<HTMLInputElement>('[data-field="systolic"] input')!
        const diastolic = bp.querySelector<HTMLInputElement>('[data-field="diastolic"] input')!
        systolic.value = '150'
        systolic.dispatchEvent(new Event('change'))
        expect(handlers.onAspectTest).not.toHaveBeenCalled()
        diastolic.value = '85'
        diastolic.dispatchEvent(new Event('change'))
        expect(handlers.onAspectTest).toHaveBeenCalledWith('blood_pressure', {
            systolic: 150,
            diastolic: 85,
        })
    })

    it('history toggles send binary direct answers', () => {
        const handlers = noopHandlers()
        const root = renderForms(intakeSections(kb), handlers)
        const history = root.querySelector('[data-panel="history:history"]')!
        const row = history.querySelector('[data-field="smoking"]')!
        const [yes, no] = [...row.querySelectorAll('button')]
        yes.dispatchEvent(new Event('click'))
        expect(handlers.onToggle).toHaveBeenLastCalledWith('smoking', 1)
        no.dispatchEvent(new Event('click'))
        expect(handlers.onToggle).toHaveBeenLastCalledWith('smoking', 0)
    })
})

describe('alpha what-if slider', () => {
    it('slider movement previews; only Apply commits', () => {
        const onPreview = vi.fn()
        const onCommit = vi.fn()
        const widget = renderAlphaSlider(0.5, { onPreview, onCommit })
        const slider = widget.querySelector<HTMLInputElement>('input[type="range"]')!
        slider.value = '0'
        slider.dispatchEvent(new Event('input'))
        expect(onPreview).toHaveBeenCalledWith(0)
        expect(onCommit).not.toHaveBeenCalled()
        widget.querySelector('button.apply')!.dispatchEvent(new Event('click'))
        expect(onCommit).toHaveBeenCalledWith(0)
    })

    it('prominent sets render one row per disease', () => {
        const widget = renderProminent({ rf: ['a', 'b'], asthma: [] })
        expect(widget.querySelector('[data-disease="rf"]')!.textContent).toBe('rf: a, b')
        expect(widget.querySelector('[data-disease="asthma"]')!.textContent).toBe('asthma: (none)')
    })
})
