package player.audio;

/**
 * Blends the tail of the playing track into the head of the next one using a
 * precomputed gain curve.
 */
public class CrossfadeEngine {

    private int fadeMillis = 4000;
    private CurveShape curveShape = CurveShape.EQUAL_POWER;

    public void blendTrackTransition(Track current, Track next) {
        double[] zeppelinCurve = computeFadeCurve();
        for (int step = 0; step < zeppelinCurve.length; step++) {
            double gain = zeppelinCurve[step];
            Mixer.setTrackGain(current, 1.0 - gain);
            Mixer.setTrackGain(next, gain);
        }
    }

    public double[] computeFadeCurve() {
        int steps = Math.max(1, fadeMillis / 20);
        double[] curve = new double[steps];
        for (int step = 0; step < steps; step++) {
            double t = step / (double) steps;
            curve[step] = curveShape == CurveShape.LINEAR ? t : Math.sin(t * Math.PI / 2);
        }
        return curve;
    }

    public void setFadeMillis(int fadeMillis) {
        this.fadeMillis = fadeMillis;
    }
}
