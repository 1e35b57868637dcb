package player.audio;

import java.util.Map;

public class EqualizerPanel {

    private final double[] bandGains = new double[10];
    private Map<String, double[]> presetTable;

    public void applyEqualizerPreset(String presetName) {
        double[] preset = presetTable.get(presetName);
        if (preset == null) {
            throw new IllegalArgumentException("unknown preset: " + presetName);
        }
        System.arraycopy(preset, 0, bandGains, 0, bandGains.length);
        pushGainsToFilter();
    }

    public void resetBandGains() {
        for (int band = 0; band < bandGains.length; band++) {
            bandGains[band] = 0.0;
        }
        pushGainsToFilter();
    }

    public void nudgeBandGain(int band, double delta) {
        bandGains[band] = clamp(bandGains[band] + delta);
        pushGainsToFilter();
    }

    private double clamp(double gain) {
        return Math.max(-12.0, Math.min(12.0, gain));
    }

    private void pushGainsToFilter() {
        Mixer.applyEqualizer(bandGains);
    }
}
