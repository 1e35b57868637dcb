package player.audio;

import java.util.ArrayDeque;
import java.util.Deque;

public class StreamBuffer {

    private final Deque<byte[]> bufferQueue = new ArrayDeque<>();
    private int chunkBytes = 4096;
    private int underruns;

    public void fillBufferChunk(AudioSource source) {
        byte[] zeppelinChunk = new byte[chunkBytes];
        int read = source.read(zeppelinChunk);
        if (read > 0) {
            bufferQueue.addLast(zeppelinChunk);
        }
    }

    public byte[] drainBufferQueue() {
        if (bufferQueue.isEmpty()) {
            underruns++;
            return null;
        }
        return bufferQueue.removeFirst();
    }

    public void underrunRecovery() {
        // double the chunk size after repeated underruns, capped at 64k
        if (underruns > 2 && chunkBytes < 65536) {
            chunkBytes *= 2;
            underruns = 0;
        }
    }

    public int queuedChunkCount() {
        return bufferQueue.size();
    }
}
